#include "fcas/backtest.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include <fmt/format.h>

#include "fcas/error.hpp"

namespace fcas {

ClassCoverage evaluate_coverage(const std::vector<ReserveRequirement>& requirements,
                                const std::vector<ImbalanceObservation>& holdout,
                                double target_margin) {
  if (requirements.empty()) {
    throw Error(ErrorCode::Configuration, "no reserve requirements to evaluate");
  }
  std::array<const ReserveRequirement*, ClusterKey::kCount> by_cluster{};
  const ReserveRequirement* pooled = nullptr;
  for (const auto& r : requirements) {
    if (r.cluster) by_cluster[r.cluster->index()] = &r;
    else pooled = &r;
  }
  ClassCoverage c;
  c.reserve_class = requirements.front().reserve_class;
  c.target_margin = target_margin;
  for (const auto& obs : holdout) {
    const ClusterKey key = ClusterKey::of(obs.time);
    const ReserveRequirement* r = by_cluster[key.index()] ? by_cluster[key.index()] : pooled;
    if (!r) {
      throw Error(ErrorCode::Configuration,
                  fmt::format("holdout time {} maps to cluster {} without a sized requirement",
                              obs.time.to_string(), key.value()));
    }
    ++c.intervals;
    if (obs.imbalance_mw > r->up_mw) ++c.up_shortages;
    else if (obs.imbalance_mw < -r->down_mw) ++c.down_shortages;
  }
  c.coverage = c.intervals == 0
                   ? 1.0
                   : 1.0 - static_cast<double>(c.up_shortages + c.down_shortages) /
                               static_cast<double>(c.intervals);
  return c;
}

namespace {

using ValueByMinute = std::unordered_map<std::int64_t, double>;

ValueByMinute index_set(const ErrorSampleSet& set) {
  ValueByMinute out;
  out.reserve(set.total_count());
  const double sign = imbalance_sign(set.driver);
  for (const auto& [key, v] : set.samples) {
    for (const auto& s : v) out.emplace(s.time.minutes(), sign * s.error_mw);
  }
  return out;
}

}  // namespace

std::vector<ImbalanceObservation> realized_imbalances(const DriverErrorSets& errors,
                                                      const std::vector<OutageRecord>& outages,
                                                      int interval_minutes,
                                                      ReserveClass reserve_class) {
  if (interval_minutes <= 0 || 60 % interval_minutes != 0) {
    throw Error(ErrorCode::Parameter,
                fmt::format("interval {} min is not a divisor of 60", interval_minutes));
  }
  if (reserve_class == ReserveClass::Tertiary) {
    throw Error(ErrorCode::Parameter, "tertiary reserves have no realized imbalance of their own");
  }
  const bool with_forecast = reserve_class == ReserveClass::Total;
  std::vector<ValueByMinute> forecast, noise;
  for (int k = 0; k < 3; ++k) {
    if (with_forecast && errors.forecast[k]) forecast.push_back(index_set(*errors.forecast[k]));
    if (errors.noise[k]) noise.push_back(index_set(*errors.noise[k]));
  }

  std::unordered_map<std::int64_t, double> outage_by_interval;
  for (const auto& r : outages) {
    if (!r.forced()) continue;
    const std::int64_t m = r.start.minutes();
    outage_by_interval[m - (((m % interval_minutes) + interval_minutes) % interval_minutes)] +=
        r.rated_capacity_mw;
  }

  // Observation times: actual samples when noise is available, interval starts otherwise.
  const ErrorSampleSet* base = nullptr;
  for (int k = 0; k < 3 && !base; ++k) {
    if (errors.noise[k]) base = &*errors.noise[k];
  }
  for (int k = 0; k < 3 && !base; ++k) {
    if (with_forecast && errors.forecast[k]) base = &*errors.forecast[k];
  }
  if (!base) {
    throw Error(ErrorCode::Configuration, "no error samples to build realized imbalances from");
  }

  std::vector<ImbalanceObservation> out;
  out.reserve(base->total_count());
  for (const auto& [key, v] : base->samples) {
    for (const auto& s : v) {
      const std::int64_t m = s.time.minutes();
      const std::int64_t start =
          m - (((m % interval_minutes) + interval_minutes) % interval_minutes);
      double total = 0.0;
      bool complete = true;
      for (const auto& f : forecast) {
        const auto it = f.find(start);
        if (it == f.end()) { complete = false; break; }
        total += it->second;
      }
      for (std::size_t k = 0; complete && k < noise.size(); ++k) {
        const auto it = noise[k].find(m);
        if (it == noise[k].end()) { complete = false; break; }
        total += it->second;
      }
      if (!complete) continue;
      if (const auto it = outage_by_interval.find(start); it != outage_by_interval.end()) {
        total += it->second;
      }
      out.push_back({s.time, total});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ImbalanceObservation& a, const ImbalanceObservation& b) {
              return a.time < b.time;
            });
  return out;
}

std::string CoverageReport::to_text() const {
  std::string out;
  for (const auto& c : classes) {
    out += fmt::format(
        "{:<9} observations={} up_shortages={} down_shortages={} coverage={:.4f} target={}\n",
        reserve_class_name(c.reserve_class), c.intervals, c.up_shortages, c.down_shortages,
        c.coverage, c.target_margin);
  }
  return out;
}

std::string CoverageReport::to_csv() const {
  std::string out = "reserve_class,intervals,up_shortages,down_shortages,coverage,target_margin\n";
  for (const auto& c : classes) {
    out += fmt::format("{},{},{},{},{:.6f},{}\n", reserve_class_name(c.reserve_class),
                       c.intervals, c.up_shortages, c.down_shortages, c.coverage,
                       c.target_margin);
  }
  return out;
}

}  // namespace fcas
