#include "fcas/error_engine.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fcas/error.hpp"

namespace fcas {

const char* error_kind_name(ErrorKind k) {
  return k == ErrorKind::Forecast ? "forecast" : "noise";
}

std::size_t ErrorSampleSet::total_count() const {
  std::size_t n = 0;
  for (const auto& [key, v] : samples) n += v.size();
  return n;
}

std::vector<double> ErrorSampleSet::all_values() const {
  std::vector<double> out;
  out.reserve(total_count());
  for (const auto& [key, v] : samples) {
    for (const auto& s : v) out.push_back(s.error_mw);
  }
  return out;
}

double imbalance_sign(Driver d) { return d == Driver::Load ? 1.0 : -1.0; }

std::vector<double> imbalance_values(const ErrorSampleSet& set, ClusterKey cluster) {
  std::vector<double> out;
  const auto it = set.samples.find(cluster);
  if (it == set.samples.end()) return out;
  const double sign = imbalance_sign(set.driver);
  out.reserve(it->second.size());
  for (const auto& s : it->second) out.push_back(sign * s.error_mw);
  return out;
}

std::vector<double> imbalance_values(const ErrorSampleSet& set) {
  auto out = set.all_values();
  const double sign = imbalance_sign(set.driver);
  for (double& v : out) v *= sign;
  return out;
}

ErrorSampleSet compute_forecast_errors(const SeriesFrame& forecast, const SeriesFrame& actual,
                                       int interval_minutes) {
  if (forecast.resolution_minutes() != interval_minutes) {
    throw Error(ErrorCode::Parameter,
                fmt::format("forecast resolution {} min differs from interval {} min",
                            forecast.resolution_minutes(), interval_minutes));
  }
  if (actual.resolution_minutes() > interval_minutes) {
    throw Error(ErrorCode::Parameter,
                fmt::format("actual resolution {} min is coarser than interval {} min",
                            actual.resolution_minutes(), interval_minutes));
  }
  if (forecast.driver() != actual.driver()) {
    throw Error(ErrorCode::Parameter, "forecast and actual series belong to different drivers");
  }
  const SeriesFrame means = resample_to_interval(actual, interval_minutes);

  ErrorSampleSet out{forecast.driver(), ErrorKind::Forecast, {}};
  const auto& f = forecast.points();
  const auto& m = means.points();
  bool overlap = false;
  // Both sequences are strictly increasing: merge.
  std::size_t i = 0, j = 0;
  while (i < f.size() && j < m.size()) {
    if (f[i].time < m[j].time) {
      ++i;
    } else if (m[j].time < f[i].time) {
      ++j;
    } else {
      out.samples[ClusterKey::of(f[i].time)].push_back(
          {f[i].time, m[j].value_mw - f[i].value_mw});
      overlap = true;
      ++i;
      ++j;
    }
  }
  if (!overlap) {
    const bool spans_overlap =
        !f.empty() && !actual.empty() && f.front().time <= actual.points().back().time &&
        actual.points().front().time < f.back().time + interval_minutes;
    throw Error(ErrorCode::EmptyInput,
                spans_overlap
                    ? fmt::format("no complete {}-minute interval overlaps between {} forecast "
                                  "and actual",
                                  interval_minutes, driver_name(forecast.driver()))
                    : fmt::format("no overlapping span between {} forecast and actual",
                                  driver_name(forecast.driver())));
  }
  return out;
}

ErrorSampleSet compute_noise_errors(const SeriesFrame& actual, int interval_minutes) {
  if (interval_minutes <= 0 || 60 % interval_minutes != 0) {
    throw Error(ErrorCode::Parameter,
                fmt::format("interval {} min is not a divisor of 60", interval_minutes));
  }
  const int res = actual.resolution_minutes();
  if (res >= interval_minutes || interval_minutes % res != 0) {
    throw Error(ErrorCode::Parameter,
                fmt::format("noise errors need actual resolution finer than the interval "
                            "({} min vs {} min)",
                            res, interval_minutes));
  }
  const int per_interval = interval_minutes / res;
  ErrorSampleSet out{actual.driver(), ErrorKind::Noise, {}};
  const auto& pts = actual.points();
  std::size_t i = 0;
  while (i < pts.size()) {
    const std::int64_t m = pts[i].time.minutes();
    const Timestamp start(m - (((m % interval_minutes) + interval_minutes) % interval_minutes));
    const Timestamp end = start + interval_minutes;
    std::size_t j = i;
    double sum = 0.0;
    while (j < pts.size() && pts[j].time < end) sum += pts[j++].value_mw;
    if (static_cast<int>(j - i) == per_interval) {
      const double mean = sum / per_interval;
      auto& bucket = out.samples[ClusterKey::of(start)];
      for (std::size_t k = i; k < j; ++k) bucket.push_back({pts[k].time, pts[k].value_mw - mean});
    }
    i = j;
  }
  return out;
}

// ------------------------------------------------------------ diagnostics

namespace {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double skew = 0.0;
  double rms = 0.0;
};

Moments moments_of(const std::vector<double>& v) {
  Moments m;
  m.n = v.size();
  if (v.empty()) return m;
  double s = 0.0, sq = 0.0;
  for (double x : v) {
    s += x;
    sq += x * x;
  }
  m.mean = s / static_cast<double>(m.n);
  m.rms = std::sqrt(sq / static_cast<double>(m.n));
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(m.n);
  m3 /= static_cast<double>(m.n);
  m.skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return m;
}

}  // namespace

SignConventionReport sign_convention_check(const ErrorSampleSet& set) {
  SignConventionReport r;
  r.driver = set.driver;
  r.kind = set.kind;
  r.convention =
      set.driver == Driver::Load
          ? "raw error = actual - forecast; positive = under-forecast demand (upward reserve "
            "need); enters the imbalance axis unchanged"
          : "raw error = actual - forecast; positive = over-delivery (downward reserve need); "
            "negated on the imbalance axis so positive values demand upward reserve";
  const Moments all = moments_of(set.all_values());
  r.count = all.n;
  r.mean = all.mean;
  r.skew = all.skew;
  for (const auto& [key, v] : set.samples) {
    if (v.empty()) continue;
    std::vector<double> vals;
    vals.reserve(v.size());
    for (const auto& s : v) vals.push_back(s.error_mw);
    const Moments cm = moments_of(vals);
    r.clusters.push_back({key, cm.n, cm.mean, cm.skew});
  }
  // A bias is systematic when it is a material share of the error magnitude.
  if (all.n > 0 && std::abs(all.mean) > 0.1 * all.rms && all.mean != 0.0) {
    if (set.driver == Driver::Load) {
      r.flags.push_back(all.mean > 0 ? "systematic under-forecast" : "systematic over-forecast");
    } else {
      r.flags.push_back(all.mean > 0 ? "systematic over-delivery" : "systematic under-delivery");
    }
  }
  return r;
}

std::string SignConventionReport::to_text() const {
  std::string out = fmt::format("{} {} errors: n={} mean={:.4f} MW skew={:.4f}\n",
                                driver_name(driver), error_kind_name(kind), count, mean, skew);
  out += fmt::format("  convention: {}\n", convention);
  for (const auto& f : flags) out += fmt::format("  flag: {}\n", f);
  return out;
}

std::string error_samples_to_csv(const ErrorSampleSet& set) {
  std::string out = "cluster_key,timestamp,driver,kind,error_mw\n";
  for (const auto& [key, v] : set.samples) {
    for (const auto& s : v) {
      out += fmt::format("{},{},{},{},{:.6f}\n", key.value(), s.time.to_string(),
                         driver_name(set.driver), error_kind_name(set.kind), s.error_mw);
    }
  }
  return out;
}

}  // namespace fcas
