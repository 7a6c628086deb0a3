#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fcas {

// A probability mass function on the uniform grid origin + k * step.
// Masses are non-negative and sum to one (within kMassTolerance).
class DiscreteDistribution {
 public:
  static constexpr double kMassTolerance = 1e-9;

  DiscreteDistribution(double origin_mw, double step_mw, std::vector<double> masses);

  // Normalizes arbitrary non-negative weights.
  static DiscreteDistribution from_weights(double origin_mw, double step_mw,
                                           std::vector<double> weights);
  // Unit mass at the grid multiple of `step_mw` nearest to `value_mw`.
  static DiscreteDistribution point_mass(double value_mw, double step_mw);

  double origin() const { return origin_; }
  double step() const { return step_; }
  std::size_t size() const { return masses_.size(); }
  std::span<const double> masses() const { return masses_; }
  double mass(std::size_t i) const { return masses_[i]; }
  double value_at(std::size_t i) const { return origin_ + static_cast<double>(i) * step_; }
  double min_value() const { return origin_; }
  double max_value() const { return value_at(size() - 1); }

  double mean() const;
  double variance() const;

 private:
  double origin_;
  double step_;
  std::vector<double> masses_;
};

struct KdeConfig {
  double grid_step_mw = 0.5;
  // Grid spans [min sample - support_sigma * h, max sample + support_sigma * h].
  double support_sigma = 6.0;
  std::optional<double> bandwidth_override;

  void validate() const;
};

// (4 / (3T))^0.2 * sigma with sigma the sample standard deviation.
// Returns nullopt when sigma == 0 (degenerate sample; build a point mass).
// Throws InsufficientData for fewer than two samples.
std::optional<double> silverman_bandwidth(std::span<const double> samples);

// Gaussian-kernel density estimate discretized on the grid: each grid point
// receives the kernel mass of its cell [u - step/2, u + step/2], kernels are
// truncated at +-support_sigma bandwidths, and the result is renormalized.
// Single-sample or zero-variance input yields a point mass.
DiscreteDistribution kde_estimate(std::span<const double> samples, const KdeConfig& config);

// Distribution of the sum of independent variables (direct discrete
// convolution). Both operands must share a grid step.
DiscreteDistribution convolve(const DiscreteDistribution& a, const DiscreteDistribution& b);

// Moves each mass point onto the grid multiples of `step_mw` by a linear split
// between the two nearest new points. Total mass and mean are preserved.
DiscreteDistribution regrid(const DiscreteDistribution& d, double step_mw);

// Drops leading/trailing grid points carrying at most `tail_mass` on each side
// and renormalizes.
DiscreteDistribution trim_tails(const DiscreteDistribution& d, double tail_mass);

// Distribution of -X.
DiscreteDistribution mirrored(const DiscreteDistribution& d);

// Running sums of the masses, aligned with the distribution grid.
struct CumulativeDistribution {
  double origin = 0.0;
  double step = 1.0;
  std::vector<double> values;

  // F(z) = P(X <= z), a right-continuous step function.
  double operator()(double z) const;
};

CumulativeDistribution cdf(const DiscreteDistribution& d);

// Lower quantile: smallest grid value z with F(z) >= p, for 0 < p < 1.
double quantile(const DiscreteDistribution& d, double p);

// "grid_mw,mass" rows.
std::string distribution_to_csv(const DiscreteDistribution& d);

}  // namespace fcas
