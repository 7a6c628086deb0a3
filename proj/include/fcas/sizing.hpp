#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fcas/data_model.hpp"
#include "fcas/distribution.hpp"
#include "fcas/error_engine.hpp"

namespace fcas {

struct ReliabilityPolicy {
  double margin = 0.99;
  double deficit_probability = 0.005;  // acceptable downward shortage
  double surplus_probability = 0.005;  // acceptable upward shortage

  // deficit = surplus = (1 - margin) / 2, rounded to 1e-12 so decimal margins
  // give decimal tail probabilities.
  static ReliabilityPolicy symmetric(double margin);
  void validate() const;
};

enum class ReserveClass { Total, Secondary, Tertiary };

const char* reserve_class_name(ReserveClass c);

struct ReserveRequirement {
  std::optional<ClusterKey> cluster;  // nullopt for pooled (static) sizing
  ReserveClass reserve_class = ReserveClass::Total;
  double up_mw = 0.0;    // covers the positive (shortage) tail
  double down_mw = 0.0;  // magnitude of the negative (surplus) band
};

struct UpDown {
  double up_mw = 0.0;
  double down_mw = 0.0;
};

// Error sample sets per driver; an absent set contributes a point mass at 0.
struct DriverErrorSets {
  std::array<std::optional<ErrorSampleSet>, 3> forecast;  // indexed by Driver
  std::array<std::optional<ErrorSampleSet>, 3> noise;

  std::optional<ErrorSampleSet>& forecast_of(Driver d) { return forecast[static_cast<int>(d)]; }
  std::optional<ErrorSampleSet>& noise_of(Driver d) { return noise[static_cast<int>(d)]; }
  const std::optional<ErrorSampleSet>& forecast_of(Driver d) const {
    return forecast[static_cast<int>(d)];
  }
  const std::optional<ErrorSampleSet>& noise_of(Driver d) const {
    return noise[static_cast<int>(d)];
  }
};

// The seven imbalance-driver PDFs of one cluster, on the shortage-positive
// axis (VRE already sign-adjusted) and a common grid step.
struct DriverPdfs {
  std::array<std::optional<DiscreteDistribution>, 3> forecast;  // indexed by Driver
  std::array<std::optional<DiscreteDistribution>, 3> noise;
  std::optional<DiscreteDistribution> outage;
};

// Convolution of all seven driver PDFs.
DiscreteDistribution build_total_reserve_pdf(ClusterKey cluster, const DriverPdfs& pdfs);

// Convolution of the three noise PDFs and the outage PDF.
DiscreteDistribution build_secondary_reserve_pdf(ClusterKey cluster, const DriverPdfs& pdfs);

// up = max(0, lower (1 - surplus) quantile); down = max(0, -lower deficit
// quantile). Both snap to grid points.
UpDown extract_requirements(const DiscreteDistribution& pdf, const ReliabilityPolicy& policy);

// max(0, total - secondary) for each direction; appends a warning when
// clamping fires.
ReserveRequirement split_tertiary(const ReserveRequirement& total,
                                  const ReserveRequirement& secondary,
                                  std::vector<std::string>* warnings = nullptr);

// Status-quo regulating reserve: 2% of forecast demand in each direction.
UpDown regulating_reserve_baseline(double forecast_demand_mw);

struct ClusterSizing {
  ClusterKey cluster;
  ReserveRequirement total;
  ReserveRequirement secondary;
  ReserveRequirement tertiary;
  std::optional<DriverPdfs> driver_pdfs;
  std::optional<DiscreteDistribution> total_pdf;
  std::optional<DiscreteDistribution> secondary_pdf;
};

struct DynamicSizingOptions {
  KdeConfig kde;
  bool keep_pdfs = false;
  // Tail mass dropped from each side of intermediate convolution products.
  double tail_trim = 1e-15;
};

struct DynamicSizingResult {
  std::vector<ClusterSizing> clusters;  // ordered by cluster key, all 168
  std::vector<std::string> warnings;

  double mean_up(ReserveClass c) const;
  double mean_down(ReserveClass c) const;
  const ClusterSizing& at(ClusterKey k) const { return clusters[k.index()]; }
};

// Per-cluster KDE of every driver, convolution, requirement extraction.
DynamicSizingResult size_dynamic(const DriverErrorSets& errors,
                                 const DiscreteDistribution& outage_pdf,
                                 const ReliabilityPolicy& policy,
                                 const DynamicSizingOptions& options = {});

// Per-driver peak forecast used by static sizing; pooled errors are scaled by
// peak_forecast_mw / base_peak_mw (no scaling when the base is unset).
struct PeakForecasts {
  std::array<double, 3> peak_forecast_mw{0.0, 0.0, 0.0};
  std::array<double, 3> base_peak_mw{0.0, 0.0, 0.0};

  double scale(Driver d) const;
};

struct StaticSizingResult {
  ReserveRequirement total;
  ReserveRequirement secondary;
  ReserveRequirement tertiary;
  std::vector<std::string> warnings;
};

// One pooled PDF per driver regardless of time of occurrence.
StaticSizingResult size_static(const DriverErrorSets& errors, const PeakForecasts& peaks,
                               const DiscreteDistribution& outage_pdf,
                               const ReliabilityPolicy& policy, const KdeConfig& kde = {});

// "cluster_key,reserve_class,up_mw,down_mw,margin" rows.
std::string requirements_to_csv(const std::vector<ReserveRequirement>& reqs, double margin);

}  // namespace fcas
