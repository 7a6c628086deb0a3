#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcas/data_model.hpp"
#include "fcas/distribution.hpp"
#include "fcas/error_engine.hpp"
#include "fcas/sizing.hpp"

namespace fcas {

struct DriverScaling {
  double growth_ratio = 1.0;      // future peak / historical peak
  double forecast_factor = 1.0;   // forecast improvement, in (0, 1]
};

// Which value stands in for the forecast of a synthesized subhourly interval.
enum class ForecastAnchor {
  // Last actual measurement of the preceding interval.
  Persistence,
  // Mean of the interval itself (a perfect mean forecast).
  IntervalMean,
};

struct ScenarioSpec {
  std::map<Driver, DriverScaling> drivers{
      {Driver::Load, {}}, {Driver::Wind, {}}, {Driver::Solar, {}}};
  double margin = 0.99;
  std::vector<int> intervals{60, 30, 15, 5};
  ForecastAnchor anchor = ForecastAnchor::Persistence;

  void validate() const;
};

// Multiplies every sample by forecast_factor * growth_ratio of its driver.
ErrorSampleSet scale_samples(const ErrorSampleSet& samples, const ScenarioSpec& spec);

// Forecast series at `interval_minutes` resolution synthesized from actuals.
// Intervals without an anchor value are dropped.
SeriesFrame synthesize_subhourly_forecasts(const SeriesFrame& actual, int interval_minutes,
                                           ForecastAnchor anchor = ForecastAnchor::Persistence);

// (mean_subhourly - mean_hourly) / mean_hourly, in percent.
double reduction_percent(double mean_subhourly, double mean_hourly);

struct SweepInputs {
  SeriesFrame load_actual;
  std::optional<SeriesFrame> wind_actual;
  std::optional<SeriesFrame> solar_actual;
  DiscreteDistribution outage_pdf = DiscreteDistribution::point_mass(0.0, 0.5);
};

struct SweepRow {
  int interval_minutes = 60;
  double mean_down_mw = 0.0;
  double down_reduction_pct = 0.0;
  double mean_up_mw = 0.0;
  double up_reduction_pct = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // requested intervals, longest first
  std::vector<std::string> warnings;

  std::string to_csv() const;
};

// Error sets for one sizing interval built from synthesized forecasts.
DriverErrorSets subhourly_error_sets(const SweepInputs& inputs, int interval_minutes,
                                     const ScenarioSpec& spec);

// Full dynamic total-reserve sizing at every requested interval; reductions
// are relative to the 60-minute run.
SweepResult run_resolution_sweep(const SweepInputs& inputs, const ScenarioSpec& spec,
                                 const KdeConfig& kde = {});

}  // namespace fcas
