#include "fcas/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fcas/error.hpp"

namespace fcas {

void ScenarioSpec::validate() const {
  for (const auto& [d, s] : drivers) {
    if (!(s.growth_ratio > 0.0) || !std::isfinite(s.growth_ratio)) {
      throw Error(ErrorCode::Configuration,
                  fmt::format("{} growth ratio must be positive", driver_name(d)));
    }
    if (!(s.forecast_factor > 0.0 && s.forecast_factor <= 1.0)) {
      throw Error(ErrorCode::Configuration,
                  fmt::format("{} forecast improvement factor must lie in (0, 1]",
                              driver_name(d)));
    }
  }
  if (!(margin > 0.0 && margin < 1.0)) {
    throw Error(ErrorCode::Configuration, fmt::format("margin {} not in (0, 1)", margin));
  }
  if (intervals.empty()) {
    throw Error(ErrorCode::Configuration, "no sizing intervals requested");
  }
  for (int m : intervals) {
    if (m <= 0 || 60 % m != 0) {
      throw Error(ErrorCode::Configuration,
                  fmt::format("interval {} min is not a divisor of 60", m));
    }
  }
}

ErrorSampleSet scale_samples(const ErrorSampleSet& samples, const ScenarioSpec& spec) {
  const auto it = spec.drivers.find(samples.driver);
  if (it == spec.drivers.end()) {
    throw Error(ErrorCode::Configuration,
                fmt::format("scenario has no scaling for driver {}", driver_name(samples.driver)));
  }
  const double factor = it->second.forecast_factor * it->second.growth_ratio;
  ErrorSampleSet out = samples;
  for (auto& [key, v] : out.samples) {
    for (auto& s : v) s.error_mw *= factor;
  }
  return out;
}

SeriesFrame synthesize_subhourly_forecasts(const SeriesFrame& actual, int interval_minutes,
                                           ForecastAnchor anchor) {
  if (interval_minutes <= 0 || 60 % interval_minutes != 0) {
    throw Error(ErrorCode::Parameter,
                fmt::format("interval {} min is not a divisor of 60", interval_minutes));
  }
  const int res = actual.resolution_minutes();
  if (res >= interval_minutes) {
    throw Error(ErrorCode::Parameter,
                fmt::format("actual resolution {} min is not finer than {} min", res,
                            interval_minutes));
  }
  std::vector<SeriesPoint> out;
  if (anchor == ForecastAnchor::IntervalMean) {
    out = resample_to_interval(actual, interval_minutes).points();
  } else {
    std::optional<std::int64_t> last_start;
    for (const auto& p : actual.points()) {
      const std::int64_t m = p.time.minutes();
      const std::int64_t start =
          m - (((m % interval_minutes) + interval_minutes) % interval_minutes);
      if (last_start && *last_start == start) continue;
      last_start = start;
      if (const auto prev = actual.at(Timestamp(start - res))) {
        out.push_back({Timestamp(start), *prev});
      }
    }
  }
  SignalDescriptor sig = actual.signal();
  sig.kind = SignalKind::Forecast;
  sig.resolution_minutes = interval_minutes;
  return SeriesFrame(std::move(sig), std::move(out));
}

double reduction_percent(double mean_subhourly, double mean_hourly) {
  if (mean_subhourly == mean_hourly) return 0.0;
  if (mean_hourly == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (mean_subhourly - mean_hourly) / mean_hourly * 100.0;
}

DriverErrorSets subhourly_error_sets(const SweepInputs& inputs, int interval_minutes,
                                     const ScenarioSpec& spec) {
  DriverErrorSets sets;
  auto add = [&](const SeriesFrame& actual) {
    const SeriesFrame forecast =
        synthesize_subhourly_forecasts(actual, interval_minutes, spec.anchor);
    sets.forecast_of(actual.driver()) =
        scale_samples(compute_forecast_errors(forecast, actual, interval_minutes), spec);
    sets.noise_of(actual.driver()) =
        scale_samples(compute_noise_errors(actual, interval_minutes), spec);
  };
  add(inputs.load_actual);
  if (inputs.wind_actual) add(*inputs.wind_actual);
  if (inputs.solar_actual) add(*inputs.solar_actual);
  return sets;
}

SweepResult run_resolution_sweep(const SweepInputs& inputs, const ScenarioSpec& spec,
                                 const KdeConfig& kde) {
  spec.validate();
  std::vector<int> intervals = spec.intervals;
  std::sort(intervals.begin(), intervals.end(), std::greater<>());
  intervals.erase(std::unique(intervals.begin(), intervals.end()), intervals.end());
  std::vector<int> runs = intervals;
  if (runs.front() != 60) runs.insert(runs.begin(), 60);

  const ReliabilityPolicy policy = ReliabilityPolicy::symmetric(spec.margin);
  DynamicSizingOptions options;
  options.kde = kde;

  SweepResult result;
  std::vector<SweepRow> rows;
  for (int interval : runs) {
    const DriverErrorSets sets = subhourly_error_sets(inputs, interval, spec);
    DynamicSizingResult sized = size_dynamic(sets, inputs.outage_pdf, policy, options);
    SweepRow row;
    row.interval_minutes = interval;
    row.mean_up_mw = sized.mean_up(ReserveClass::Total);
    row.mean_down_mw = sized.mean_down(ReserveClass::Total);
    rows.push_back(row);
    for (auto& w : sized.warnings) {
      result.warnings.push_back(fmt::format("{}-min: {}", interval, w));
    }
  }
  const SweepRow hourly = rows.front();
  for (auto& row : rows) {
    row.down_reduction_pct = reduction_percent(row.mean_down_mw, hourly.mean_down_mw);
    row.up_reduction_pct = reduction_percent(row.mean_up_mw, hourly.mean_up_mw);
    if (std::find(intervals.begin(), intervals.end(), row.interval_minutes) != intervals.end()) {
      result.rows.push_back(row);
    }
  }
  return result;
}

std::string SweepResult::to_csv() const {
  std::string out = "interval_min,mean_down_mw,down_reduction_pct,mean_up_mw,up_reduction_pct\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:.3f},{:.1f},{:.3f},{:.1f}\n", r.interval_minutes, r.mean_down_mw,
                       r.down_reduction_pct, r.mean_up_mw, r.up_reduction_pct);
  }
  return out;
}

}  // namespace fcas
