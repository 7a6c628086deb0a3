#include "fcas/outage_model.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "fcas/error.hpp"
#include "text_util.hpp"

namespace fcas {

double compute_for(const std::vector<OutageRecord>& unit_records, const TimeSpan& period) {
  if (!(period.start < period.end)) {
    throw Error(ErrorCode::Parameter, "outage observation period has zero length");
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> spans;
  for (const auto& r : unit_records) {
    if (!r.forced()) continue;
    const std::int64_t s = std::max(r.start.minutes(), period.start.minutes());
    const std::int64_t e = std::min(r.end.minutes(), period.end.minutes());
    if (s < e) spans.emplace_back(s, e);
  }
  std::sort(spans.begin(), spans.end());
  std::int64_t covered = 0;
  std::int64_t cur_s = 0, cur_e = 0;
  bool open = false;
  for (const auto& [s, e] : spans) {
    if (open && s <= cur_e) {
      cur_e = std::max(cur_e, e);
    } else {
      if (open) covered += cur_e - cur_s;
      cur_s = s;
      cur_e = e;
      open = true;
    }
  }
  if (open) covered += cur_e - cur_s;
  return static_cast<double>(covered) / static_cast<double>(period.end - period.start);
}

std::optional<double> compute_mttr(const std::vector<OutageRecord>& unit_records) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& r : unit_records) {
    if (!r.forced()) continue;
    total += r.duration_hours();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return total / static_cast<double>(n);
}

double compute_fop(double for_rate, double mttr_hours, const std::string& unit_id) {
  if (!(mttr_hours > 0.0)) {
    throw Error(ErrorCode::Parameter,
                fmt::format("unit '{}': MTTR must be positive", unit_id));
  }
  const double fop = for_rate / mttr_hours;
  if (fop > 1.0) {
    throw Error(ErrorCode::DataInconsistency,
                fmt::format("unit '{}': FOP = {:.6g} / {:.6g} h = {:.6g} exceeds 1", unit_id,
                            for_rate, mttr_hours, fop));
  }
  return fop;
}

OutageStatsResult compute_unit_stats(const std::vector<OutageRecord>& records,
                                     const TimeSpan& period, double fop_floor) {
  std::map<std::string, std::vector<OutageRecord>> by_unit;
  for (const auto& r : records) by_unit[r.unit_id].push_back(r);

  OutageStatsResult out;
  for (const auto& [unit, recs] : by_unit) {
    GeneratorOutageStats s;
    s.unit_id = unit;
    s.rated_capacity_mw = recs.front().rated_capacity_mw;
    s.observation_hours = period.hours();
    s.for_rate = compute_for(recs, period);
    s.mttr_hours = compute_mttr(recs);
    if (s.mttr_hours) {
      s.fop = compute_fop(s.for_rate, *s.mttr_hours, unit);
    } else {
      out.warnings.push_back(
          fmt::format("unit '{}' has no forced outages; FOP set to {}", unit,
                      std::max(0.0, fop_floor)));
    }
    s.fop = std::max(s.fop, std::max(0.0, fop_floor));
    out.units.push_back(std::move(s));
  }
  return out;
}

DiscreteDistribution unit_outage_distribution(const GeneratorOutageStats& stats,
                                              double grid_step_mw,
                                              OutageConvention convention) {
  if (!(stats.rated_capacity_mw > 0.0)) {
    throw Error(ErrorCode::Parameter,
                fmt::format("unit '{}': rated capacity must be positive", stats.unit_id));
  }
  if (!(stats.fop >= 0.0 && stats.fop <= 1.0)) {
    throw Error(ErrorCode::DataInconsistency,
                fmt::format("unit '{}': FOP {} outside [0, 1]", stats.unit_id, stats.fop));
  }
  const double at_rated =
      convention == OutageConvention::CapacityLost ? stats.fop : 1.0 - stats.fop;
  if (at_rated == 0.0) return DiscreteDistribution::point_mass(0.0, grid_step_mw);
  if (at_rated == 1.0) return regrid(DiscreteDistribution(stats.rated_capacity_mw,
                                                          stats.rated_capacity_mw, {1.0}),
                                     grid_step_mw);
  // Two points {0, rated} expressed on a grid of step `rated`, then moved to
  // the common grid.
  const DiscreteDistribution two_point(0.0, stats.rated_capacity_mw,
                                       {1.0 - at_rated, at_rated});
  return regrid(two_point, grid_step_mw);
}

DiscreteDistribution total_outage_distribution(const std::vector<GeneratorOutageStats>& all_stats,
                                               double grid_step_mw,
                                               OutageConvention convention) {
  if (all_stats.empty()) {
    throw Error(ErrorCode::Parameter, "total outage distribution needs at least one unit");
  }
  DiscreteDistribution total = unit_outage_distribution(all_stats.front(), grid_step_mw, convention);
  for (std::size_t j = 1; j < all_stats.size(); ++j) {
    total = convolve(total, unit_outage_distribution(all_stats[j], grid_step_mw, convention));
  }
  return total;
}

std::string outage_stats_to_csv(const std::vector<GeneratorOutageStats>& stats) {
  std::string out = "unit_id,rated_mw,for,mttr_h,fop\n";
  for (const auto& s : stats) {
    out += fmt::format("{},{},{:.9g},{},{:.9g}\n", s.unit_id,
                       detail::format_shortest(s.rated_capacity_mw), s.for_rate,
                       s.mttr_hours ? fmt::format("{:.6g}", *s.mttr_hours) : std::string(),
                       s.fop);
  }
  return out;
}

}  // namespace fcas
