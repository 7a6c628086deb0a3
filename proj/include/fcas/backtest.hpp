#pragma once

#include <string>
#include <vector>

#include "fcas/data_model.hpp"
#include "fcas/sizing.hpp"

namespace fcas {

struct ImbalanceObservation {
  Timestamp time;
  double imbalance_mw = 0.0;  // shortage-positive
};

struct ClassCoverage {
  ReserveClass reserve_class = ReserveClass::Total;
  std::size_t intervals = 0;  // observations evaluated
  std::size_t up_shortages = 0;
  std::size_t down_shortages = 0;
  double coverage = 1.0;
  double target_margin = 0.0;
};

struct CoverageReport {
  std::vector<ClassCoverage> classes;

  std::string to_text() const;
  std::string to_csv() const;
};

// Counts observations above up_mw (upward shortage) or below -down_mw
// (downward shortage) of the requirement of the observation's hour-of-week.
// A requirement without a cluster applies to every observation. Throws
// Configuration when an observation maps to a cluster without requirement.
ClassCoverage evaluate_coverage(const std::vector<ReserveRequirement>& requirements,
                                const std::vector<ImbalanceObservation>& holdout,
                                double target_margin);

// Realized imbalance per observation, assembled from the same error
// definitions used for sizing: for the total class each actual sample
// contributes sum_d sign_d * (forecast error of its interval + its noise
// error); the secondary class keeps only the noise terms. Forced outages
// starting within an interval add their rated capacity to that interval.
// Observations where any present driver lacks data are skipped.
std::vector<ImbalanceObservation> realized_imbalances(const DriverErrorSets& errors,
                                                      const std::vector<OutageRecord>& outages,
                                                      int interval_minutes,
                                                      ReserveClass reserve_class);

}  // namespace fcas
