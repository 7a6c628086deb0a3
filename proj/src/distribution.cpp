#include "fcas/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "fcas/error.hpp"
#include "text_util.hpp"

namespace fcas {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Grid index (relative to multiples of step) of the point nearest to x.
long long nearest_multiple(double x, double step) {
  return static_cast<long long>(std::llround(x / step));
}

}  // namespace

// ------------------------------------------------------ DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(double origin_mw, double step_mw,
                                           std::vector<double> masses)
    : origin_(origin_mw), step_(step_mw), masses_(std::move(masses)) {
  if (!(step_ > 0.0) || !std::isfinite(step_) || !std::isfinite(origin_)) {
    throw Error(ErrorCode::Parameter, "distribution step must be positive and finite");
  }
  if (masses_.empty()) {
    throw Error(ErrorCode::Parameter, "distribution needs at least one grid point");
  }
  double total = 0.0;
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error(ErrorCode::Parameter, "distribution masses must be finite and non-negative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::Parameter,
                fmt::format("distribution masses sum to {:.12g}, expected 1", total));
  }
}

DiscreteDistribution DiscreteDistribution::from_weights(double origin_mw, double step_mw,
                                                        std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::Parameter, "weights must have a positive finite sum");
  }
  for (double& w : weights) w /= total;
  return DiscreteDistribution(origin_mw, step_mw, std::move(weights));
}

DiscreteDistribution DiscreteDistribution::point_mass(double value_mw, double step_mw) {
  if (!(step_mw > 0.0)) {
    throw Error(ErrorCode::Parameter, "distribution step must be positive");
  }
  const double snapped = static_cast<double>(nearest_multiple(value_mw, step_mw)) * step_mw;
  return DiscreteDistribution(snapped, step_mw, {1.0});
}

double DiscreteDistribution::mean() const {
  // Accumulate offsets from the origin to limit cancellation.
  double acc = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    acc += masses_[i] * static_cast<double>(i);
  }
  return origin_ + acc * step_;
}

double DiscreteDistribution::variance() const {
  double m1 = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) m1 += masses_[i] * static_cast<double>(i);
  double m2 = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    const double d = static_cast<double>(i) - m1;
    m2 += masses_[i] * d * d;
  }
  return m2 * step_ * step_;
}

// ---------------------------------------------------------------------- KDE

void KdeConfig::validate() const {
  if (!(grid_step_mw > 0.0)) {
    throw Error(ErrorCode::Parameter, "KDE grid step must be positive");
  }
  if (!(support_sigma >= 3.0)) {
    throw Error(ErrorCode::Parameter, "KDE support must be at least 3 bandwidths");
  }
  if (bandwidth_override && !(*bandwidth_override > 0.0)) {
    throw Error(ErrorCode::Parameter, "KDE bandwidth override must be positive");
  }
}

std::optional<double> silverman_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw Error(ErrorCode::InsufficientData,
                fmt::format("bandwidth needs at least 2 samples, got {}", n));
  }
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                      static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sigma > 0.0)) return std::nullopt;
  return std::pow(4.0 / (3.0 * static_cast<double>(n)), 0.2) * sigma;
}

DiscreteDistribution kde_estimate(std::span<const double> samples, const KdeConfig& config) {
  config.validate();
  if (samples.empty()) {
    throw Error(ErrorCode::InsufficientData, "KDE needs at least one sample");
  }
  const double step = config.grid_step_mw;
  std::optional<double> bandwidth = config.bandwidth_override;
  if (!bandwidth && samples.size() >= 2) bandwidth = silverman_bandwidth(samples);
  if (!bandwidth) {
    // Single sample or zero variance: every sample is the same value.
    return DiscreteDistribution::point_mass(samples.front(), step);
  }
  const double h = *bandwidth;
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double reach = config.support_sigma * h;
  const long long first = nearest_multiple(*lo_it - reach, step);
  const long long last = nearest_multiple(*hi_it + reach, step);
  const std::size_t n = static_cast<std::size_t>(last - first + 1);
  std::vector<double> weights(n, 0.0);
  std::vector<double> edge_cdf;

  for (double x : samples) {
    const long long a = std::max(first, nearest_multiple(x - reach, step));
    const long long b = std::min(last, nearest_multiple(x + reach, step));
    // Cells [k*step - step/2, k*step + step/2] for k in [a, b].
    edge_cdf.resize(static_cast<std::size_t>(b - a + 2));
    for (long long k = a; k <= b + 1; ++k) {
      const double edge = (static_cast<double>(k) - 0.5) * step;
      edge_cdf[static_cast<std::size_t>(k - a)] = normal_cdf((edge - x) / h);
    }
    for (long long k = a; k <= b; ++k) {
      const std::size_t e = static_cast<std::size_t>(k - a);
      weights[static_cast<std::size_t>(k - first)] += edge_cdf[e + 1] - edge_cdf[e];
    }
  }
  return DiscreteDistribution::from_weights(static_cast<double>(first) * step, step,
                                            std::move(weights));
}

// -------------------------------------------------------------- convolution

DiscreteDistribution convolve(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  const double rel = std::abs(a.step() - b.step()) / std::max(a.step(), b.step());
  if (rel > 1e-12) {
    throw Error(ErrorCode::GridIncompatibility,
                fmt::format("cannot convolve grids with steps {} and {} MW; regrid first",
                            a.step(), b.step()));
  }
  const auto am = a.masses();
  const auto bm = b.masses();
  std::vector<double> out(am.size() + bm.size() - 1, 0.0);
  for (std::size_t i = 0; i < am.size(); ++i) {
    const double ai = am[i];
    if (ai == 0.0) continue;
    double* dst = out.data() + i;
    for (std::size_t j = 0; j < bm.size(); ++j) dst[j] += ai * bm[j];
  }
  return DiscreteDistribution::from_weights(a.origin() + b.origin(), a.step(), std::move(out));
}

DiscreteDistribution regrid(const DiscreteDistribution& d, double step_mw) {
  if (!(step_mw > 0.0)) {
    throw Error(ErrorCode::Parameter, "regrid step must be positive");
  }
  constexpr double kSnap = 1e-9;
  // Position of every source point in units of the new step.
  auto position = [&](std::size_t i) { return d.value_at(i) / step_mw; };
  auto lower = [&](double y) {
    const double r = std::round(y);
    return std::abs(y - r) < kSnap ? static_cast<long long>(r)
                                   : static_cast<long long>(std::floor(y));
  };
  auto upper = [&](double y) {
    const double r = std::round(y);
    return std::abs(y - r) < kSnap ? static_cast<long long>(r)
                                   : static_cast<long long>(std::ceil(y));
  };
  const long long first = lower(position(0));
  const long long last = upper(position(d.size() - 1));
  std::vector<double> out(static_cast<std::size_t>(last - first + 1), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double m = d.mass(i);
    if (m == 0.0) continue;
    const double y = position(i);
    const long long lo = lower(y);
    const long long hi = upper(y);
    if (lo == hi) {
      out[static_cast<std::size_t>(lo - first)] += m;
    } else {
      const double frac = y - static_cast<double>(lo);
      out[static_cast<std::size_t>(lo - first)] += m * (1.0 - frac);
      out[static_cast<std::size_t>(hi - first)] += m * frac;
    }
  }
  return DiscreteDistribution::from_weights(static_cast<double>(first) * step_mw, step_mw,
                                            std::move(out));
}

DiscreteDistribution trim_tails(const DiscreteDistribution& d, double tail_mass) {
  const auto m = d.masses();
  std::size_t lo = 0;
  double acc = 0.0;
  while (lo + 1 < m.size() && acc + m[lo] <= tail_mass) acc += m[lo++];
  std::size_t hi = m.size() - 1;
  acc = 0.0;
  while (hi > lo && acc + m[hi] <= tail_mass) acc += m[hi--];
  if (lo == 0 && hi == m.size() - 1) return d;
  return DiscreteDistribution::from_weights(d.value_at(lo), d.step(),
                                            std::vector<double>(m.begin() + static_cast<long>(lo),
                                                                m.begin() + static_cast<long>(hi) + 1));
}

DiscreteDistribution mirrored(const DiscreteDistribution& d) {
  std::vector<double> rev(d.masses().rbegin(), d.masses().rend());
  return DiscreteDistribution(-d.max_value(), d.step(), std::move(rev));
}

// ----------------------------------------------------------- CDF, quantile

double CumulativeDistribution::operator()(double z) const {
  const double pos = (z - origin) / step;
  if (pos < -1e-9) return 0.0;
  const auto k = static_cast<std::size_t>(std::floor(pos + 1e-9));
  if (k >= values.size()) return 1.0;
  return values[k];
}

CumulativeDistribution cdf(const DiscreteDistribution& d) {
  CumulativeDistribution f{d.origin(), d.step(), {}};
  f.values.resize(d.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    acc += d.mass(i);
    f.values[i] = std::min(acc, 1.0);
  }
  f.values.back() = 1.0;
  return f;
}

double quantile(const DiscreteDistribution& d, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::Parameter, fmt::format("quantile probability {} not in (0, 1)", p));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    acc += d.mass(i);
    if (acc >= p) return d.value_at(i);
  }
  return d.max_value();
}

std::string distribution_to_csv(const DiscreteDistribution& d) {
  std::string out = "grid_mw,mass\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += fmt::format("{:.6f},{}\n", d.value_at(i),
                       detail::format_shortest(d.mass(i)));
  }
  return out;
}

}  // namespace fcas
