#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcas/data_model.hpp"
#include "fcas/distribution.hpp"

namespace fcas {

struct TimeSpan {
  Timestamp start;
  Timestamp end;

  double hours() const { return static_cast<double>(end - start) / 60.0; }
};

struct GeneratorOutageStats {
  std::string unit_id;
  double rated_capacity_mw = 0.0;
  double for_rate = 0.0;             // forced outage rate, fraction of hours out
  std::optional<double> mttr_hours;  // absent when the unit had no forced outage
  double fop = 0.0;                  // probability of going out, per hour
  double observation_hours = 0.0;
};

// Where the probability mass of a single unit sits on the imbalance axis.
enum class OutageConvention {
  // FOP at +rated (capacity lost), 1 - FOP at 0.
  CapacityLost,
  // The printed piecewise form read literally: FOP at 0, 1 - FOP at +rated.
  Literal,
};

// Forced-outage hours (union of overlapping records, clipped to the period)
// divided by period hours. Planned records are ignored.
double compute_for(const std::vector<OutageRecord>& unit_records, const TimeSpan& period);

// Mean forced-outage duration in hours; nullopt without forced records.
std::optional<double> compute_mttr(const std::vector<OutageRecord>& unit_records);

// FOR / MTTR. Throws DataInconsistency (naming the unit) when the result
// exceeds one.
double compute_fop(double for_rate, double mttr_hours, const std::string& unit_id = {});

struct OutageStatsResult {
  std::vector<GeneratorOutageStats> units;  // sorted by unit_id
  std::vector<std::string> warnings;
};

// Per-unit statistics over `period`. Units without forced outages get
// FOP = max(0, fop_floor) and a warning.
OutageStatsResult compute_unit_stats(const std::vector<OutageRecord>& records,
                                     const TimeSpan& period, double fop_floor = 0.0);

DiscreteDistribution unit_outage_distribution(
    const GeneratorOutageStats& stats, double grid_step_mw,
    OutageConvention convention = OutageConvention::CapacityLost);

// Left fold of convolve over every unit distribution.
DiscreteDistribution total_outage_distribution(
    const std::vector<GeneratorOutageStats>& all_stats, double grid_step_mw,
    OutageConvention convention = OutageConvention::CapacityLost);

// "unit_id,rated_mw,for,mttr_h,fop" rows; mttr_h is empty for units without
// forced outages.
std::string outage_stats_to_csv(const std::vector<GeneratorOutageStats>& stats);

}  // namespace fcas
