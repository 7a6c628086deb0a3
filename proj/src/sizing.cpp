#include "fcas/sizing.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fcas/error.hpp"
#include "parallel.hpp"

namespace fcas {

namespace {

constexpr std::array<Driver, 3> kDrivers{Driver::Load, Driver::Wind, Driver::Solar};

const DiscreteDistribution& require(const std::optional<DiscreteDistribution>& pdf,
                                    const char* what, Driver driver, ClusterKey cluster) {
  if (!pdf) {
    throw Error(ErrorCode::Configuration,
                fmt::format("missing {} {} PDF for cluster {}", driver_name(driver), what,
                            cluster.value()));
  }
  return *pdf;
}

const DiscreteDistribution& require_outage(const DriverPdfs& pdfs, ClusterKey cluster) {
  if (!pdfs.outage) {
    throw Error(ErrorCode::Configuration,
                fmt::format("missing outage PDF for cluster {}", cluster.value()));
  }
  return *pdfs.outage;
}

DiscreteDistribution fold(std::vector<const DiscreteDistribution*> parts, double tail_trim) {
  DiscreteDistribution acc = *parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    acc = convolve(acc, *parts[i]);
    if (tail_trim > 0.0) acc = trim_tails(acc, tail_trim);
  }
  return acc;
}

}  // namespace

// ----------------------------------------------------------------- policy

ReliabilityPolicy ReliabilityPolicy::symmetric(double margin) {
  if (!(margin > 0.0 && margin < 1.0)) {
    throw Error(ErrorCode::Parameter,
                fmt::format("reliability margin {} not in (0, 1)", margin));
  }
  const double tail = std::round((1.0 - margin) * 0.5 * 1e12) / 1e12;
  return ReliabilityPolicy{margin, tail, tail};
}

void ReliabilityPolicy::validate() const {
  if (!(margin > 0.0 && margin < 1.0)) {
    throw Error(ErrorCode::Parameter,
                fmt::format("reliability margin {} not in (0, 1)", margin));
  }
  if (!(deficit_probability > 0.0) || !(surplus_probability > 0.0) ||
      std::abs(deficit_probability + surplus_probability + margin - 1.0) > 1e-9) {
    throw Error(ErrorCode::Parameter,
                "deficit and surplus probabilities must be positive and sum with the margin "
                "to one");
  }
}

const char* reserve_class_name(ReserveClass c) {
  switch (c) {
    case ReserveClass::Total: return "total";
    case ReserveClass::Secondary: return "secondary";
    case ReserveClass::Tertiary: return "tertiary";
  }
  return "?";
}

// ------------------------------------------------------------ convolution

DiscreteDistribution build_total_reserve_pdf(ClusterKey cluster, const DriverPdfs& pdfs) {
  std::vector<const DiscreteDistribution*> parts;
  for (Driver d : kDrivers) {
    parts.push_back(&require(pdfs.forecast[static_cast<int>(d)], "forecast-error", d, cluster));
    parts.push_back(&require(pdfs.noise[static_cast<int>(d)], "noise-error", d, cluster));
  }
  parts.push_back(&require_outage(pdfs, cluster));
  return fold(std::move(parts), 0.0);
}

DiscreteDistribution build_secondary_reserve_pdf(ClusterKey cluster, const DriverPdfs& pdfs) {
  std::vector<const DiscreteDistribution*> parts;
  for (Driver d : kDrivers) {
    parts.push_back(&require(pdfs.noise[static_cast<int>(d)], "noise-error", d, cluster));
  }
  parts.push_back(&require_outage(pdfs, cluster));
  return fold(std::move(parts), 0.0);
}

// ------------------------------------------------------------ requirements

UpDown extract_requirements(const DiscreteDistribution& pdf, const ReliabilityPolicy& policy) {
  policy.validate();
  const double upper = quantile(pdf, 1.0 - policy.surplus_probability);
  const double lower = quantile(pdf, policy.deficit_probability);
  // +0.0 normalizes a negative zero.
  return UpDown{std::max(0.0, upper) + 0.0, std::max(0.0, -lower) + 0.0};
}

ReserveRequirement split_tertiary(const ReserveRequirement& total,
                                  const ReserveRequirement& secondary,
                                  std::vector<std::string>* warnings) {
  if (total.cluster != secondary.cluster) {
    throw Error(ErrorCode::Parameter, "tertiary split needs total and secondary of one cluster");
  }
  ReserveRequirement t{total.cluster, ReserveClass::Tertiary, 0.0, 0.0};
  const double up = total.up_mw - secondary.up_mw;
  const double down = total.down_mw - secondary.down_mw;
  t.up_mw = std::max(0.0, up);
  t.down_mw = std::max(0.0, down);
  if (warnings && (up < 0.0 || down < 0.0)) {
    const std::string where =
        total.cluster ? fmt::format("cluster {}", total.cluster->value()) : "static sizing";
    warnings->push_back(fmt::format(
        "{}: secondary exceeds total ({}{}); tertiary clamped to 0", where,
        up < 0.0 ? fmt::format("up by {:.3f} MW", -up) : "",
        down < 0.0 ? fmt::format("{}down by {:.3f} MW", up < 0.0 ? ", " : "", -down) : ""));
  }
  return t;
}

UpDown regulating_reserve_baseline(double forecast_demand_mw) {
  if (!(forecast_demand_mw >= 0.0)) {
    throw Error(ErrorCode::Parameter, "forecast demand must be non-negative");
  }
  return UpDown{0.02 * forecast_demand_mw, 0.02 * forecast_demand_mw};
}

// ----------------------------------------------------------------- dynamic

double DynamicSizingResult::mean_up(ReserveClass c) const {
  if (clusters.empty()) return 0.0;
  double s = 0.0;
  for (const auto& cs : clusters) {
    s += c == ReserveClass::Total       ? cs.total.up_mw
         : c == ReserveClass::Secondary ? cs.secondary.up_mw
                                        : cs.tertiary.up_mw;
  }
  return s / static_cast<double>(clusters.size());
}

double DynamicSizingResult::mean_down(ReserveClass c) const {
  if (clusters.empty()) return 0.0;
  double s = 0.0;
  for (const auto& cs : clusters) {
    s += c == ReserveClass::Total       ? cs.total.down_mw
         : c == ReserveClass::Secondary ? cs.secondary.down_mw
                                        : cs.tertiary.down_mw;
  }
  return s / static_cast<double>(clusters.size());
}

namespace {

std::optional<DiscreteDistribution> cluster_pdf(const std::optional<ErrorSampleSet>& set,
                                                ClusterKey cluster, const KdeConfig& kde,
                                                const char* what) {
  if (!set) return DiscreteDistribution::point_mass(0.0, kde.grid_step_mw);
  const auto values = imbalance_values(*set, cluster);
  if (values.empty()) {
    throw Error(ErrorCode::Configuration,
                fmt::format("missing {} {} PDF for cluster {}: no samples",
                            driver_name(set->driver), what, cluster.value()));
  }
  return kde_estimate(values, kde);
}

struct ClassPdfs {
  DiscreteDistribution secondary;
  DiscreteDistribution total;
};

// Secondary first, then the forecast PDFs on top of it: the same product as
// the seven-way fold, reusing the shared factors.
ClassPdfs reserve_pdfs(ClusterKey cluster, const DriverPdfs& pdfs, double tail_trim) {
  std::vector<const DiscreteDistribution*> secondary_parts;
  for (Driver d : kDrivers) {
    secondary_parts.push_back(&require(pdfs.noise[static_cast<int>(d)], "noise-error", d, cluster));
  }
  secondary_parts.push_back(&require_outage(pdfs, cluster));
  DiscreteDistribution secondary = fold(secondary_parts, tail_trim);

  std::vector<const DiscreteDistribution*> total_parts{&secondary};
  for (Driver d : kDrivers) {
    total_parts.push_back(
        &require(pdfs.forecast[static_cast<int>(d)], "forecast-error", d, cluster));
  }
  DiscreteDistribution total = fold(total_parts, tail_trim);
  return ClassPdfs{std::move(secondary), std::move(total)};
}

}  // namespace

DynamicSizingResult size_dynamic(const DriverErrorSets& errors,
                                 const DiscreteDistribution& outage_pdf,
                                 const ReliabilityPolicy& policy,
                                 const DynamicSizingOptions& options) {
  policy.validate();
  options.kde.validate();
  const double step = options.kde.grid_step_mw;
  DiscreteDistribution outage = regrid(outage_pdf, step);
  if (options.tail_trim > 0.0) outage = trim_tails(outage, options.tail_trim);

  std::vector<std::optional<ClusterSizing>> slots(ClusterKey::kCount);
  std::vector<std::vector<std::string>> slot_warnings(ClusterKey::kCount);
  detail::parallel_for(ClusterKey::kCount, [&](std::size_t idx) {
    const ClusterKey key(static_cast<int>(idx) + 1);
    DriverPdfs pdfs;
    for (Driver d : kDrivers) {
      const int k = static_cast<int>(d);
      pdfs.forecast[k] = cluster_pdf(errors.forecast[k], key, options.kde, "forecast-error");
      pdfs.noise[k] = cluster_pdf(errors.noise[k], key, options.kde, "noise-error");
    }
    pdfs.outage = outage;
    ClassPdfs pdf = reserve_pdfs(key, pdfs, options.tail_trim);
    const UpDown t = extract_requirements(pdf.total, policy);
    const UpDown s = extract_requirements(pdf.secondary, policy);
    ClusterSizing cs{key,
                     {key, ReserveClass::Total, t.up_mw, t.down_mw},
                     {key, ReserveClass::Secondary, s.up_mw, s.down_mw},
                     {},
                     std::nullopt,
                     std::nullopt,
                     std::nullopt};
    cs.tertiary = split_tertiary(cs.total, cs.secondary, &slot_warnings[idx]);
    if (options.keep_pdfs) {
      cs.driver_pdfs = std::move(pdfs);
      cs.total_pdf = std::move(pdf.total);
      cs.secondary_pdf = std::move(pdf.secondary);
    }
    slots[idx] = std::move(cs);
  });

  DynamicSizingResult result;
  result.clusters.reserve(ClusterKey::kCount);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    result.clusters.push_back(std::move(*slots[i]));
    for (auto& w : slot_warnings[i]) result.warnings.push_back(std::move(w));
  }
  return result;
}

// ------------------------------------------------------------------ static

double PeakForecasts::scale(Driver d) const {
  const int k = static_cast<int>(d);
  if (!(base_peak_mw[k] > 0.0)) return 1.0;
  return peak_forecast_mw[k] / base_peak_mw[k];
}

StaticSizingResult size_static(const DriverErrorSets& errors, const PeakForecasts& peaks,
                               const DiscreteDistribution& outage_pdf,
                               const ReliabilityPolicy& policy, const KdeConfig& kde) {
  policy.validate();
  kde.validate();
  auto pooled = [&](const std::optional<ErrorSampleSet>& set) {
    if (!set) return DiscreteDistribution::point_mass(0.0, kde.grid_step_mw);
    auto values = imbalance_values(*set);
    if (values.empty()) {
      throw Error(ErrorCode::InsufficientData,
                  fmt::format("no pooled {} {} error samples", driver_name(set->driver),
                              error_kind_name(set->kind)));
    }
    const double c = peaks.scale(set->driver);
    for (double& v : values) v *= c;
    return kde_estimate(values, kde);
  };
  bool any = false;
  for (int k = 0; k < 3; ++k) any = any || errors.forecast[k] || errors.noise[k];
  if (!any) throw Error(ErrorCode::InsufficientData, "static sizing needs error samples");

  DriverPdfs pdfs;
  for (int k = 0; k < 3; ++k) {
    pdfs.forecast[k] = pooled(errors.forecast[k]);
    pdfs.noise[k] = pooled(errors.noise[k]);
  }
  pdfs.outage = trim_tails(regrid(outage_pdf, kde.grid_step_mw), 1e-15);
  // Cluster key is only used in error messages here.
  const ClassPdfs pdf = reserve_pdfs(ClusterKey(1), pdfs, 1e-15);
  const UpDown t = extract_requirements(pdf.total, policy);
  const UpDown s = extract_requirements(pdf.secondary, policy);
  StaticSizingResult r;
  r.total = {std::nullopt, ReserveClass::Total, t.up_mw, t.down_mw};
  r.secondary = {std::nullopt, ReserveClass::Secondary, s.up_mw, s.down_mw};
  r.tertiary = split_tertiary(r.total, r.secondary, &r.warnings);
  return r;
}

std::string requirements_to_csv(const std::vector<ReserveRequirement>& reqs, double margin) {
  std::string out = "cluster_key,reserve_class,up_mw,down_mw,margin\n";
  for (const auto& r : reqs) {
    out += fmt::format("{},{},{:.3f},{:.3f},{}\n",
                       r.cluster ? std::to_string(r.cluster->value()) : std::string("all"),
                       reserve_class_name(r.reserve_class), r.up_mw, r.down_mw, margin);
  }
  return out;
}

}  // namespace fcas
