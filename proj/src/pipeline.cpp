#include "fcas/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "fcas/error.hpp"
#include "svg.hpp"
#include "text_util.hpp"

namespace fcas {

namespace fs = std::filesystem;
using nlohmann::json;

const char* sizing_mode_name(SizingMode m) {
  switch (m) {
    case SizingMode::Dynamic: return "dynamic";
    case SizingMode::Static: return "static";
    case SizingMode::Baseline2Pct: return "baseline2pct";
  }
  return "?";
}

std::optional<SizingMode> parse_sizing_mode(std::string_view s) {
  if (s == "dynamic") return SizingMode::Dynamic;
  if (s == "static") return SizingMode::Static;
  if (s == "baseline2pct") return SizingMode::Baseline2Pct;
  return std::nullopt;
}

// ------------------------------------------------------------------ config

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::Configuration, msg); };
  if (!(margin > 0.0 && margin < 1.0)) fail(fmt::format("margin {} not in (0, 1)", margin));
  auto check_interval = [&](int m, const char* what) {
    if (m <= 0 || 60 % m != 0) {
      fail(fmt::format("{} {} min is not a divisor of 60", what, m));
    }
    if (m != 5 && m != 15 && m != 30 && m != 60) {
      fail(fmt::format("{} {} min is not one of 5, 15, 30, 60", what, m));
    }
  };
  check_interval(interval_minutes, "interval");
  for (int m : scenario.intervals) check_interval(m, "sweep interval");
  if (forecast_resolution_minutes <= 0 || actual_resolution_minutes <= 0) {
    fail("series resolutions must be positive");
  }
  if (!(fop_floor >= 0.0 && fop_floor <= 1.0)) fail("fop_floor must lie in [0, 1]");
  if (outage_period && !(outage_period->start < outage_period->end)) {
    fail("outage period end must follow its start");
  }
  for (int c : dump_clusters) {
    if (c < 1 || c > ClusterKey::kCount) fail(fmt::format("dump cluster {} not in [1, 168]", c));
  }
  try {
    kde.validate();
    scenario.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<fs::path> path_list(const json& j, const fs::path& base) {
  std::vector<fs::path> out;
  if (j.is_string()) {
    out.push_back(resolve(base, j.get<std::string>()));
  } else if (j.is_array()) {
    for (const auto& e : j) out.push_back(resolve(base, e.get<std::string>()));
  } else {
    throw Error(ErrorCode::Configuration, "input path must be a string or a list of strings");
  }
  return out;
}

InputPaths parse_inputs(const json& j, const fs::path& base, const char* section) {
  if (!j.is_object()) {
    throw Error(ErrorCode::Configuration, fmt::format("'{}' must be an object", section));
  }
  InputPaths p;
  auto required = [&](const char* key) {
    if (!j.contains(key)) {
      throw Error(ErrorCode::Configuration, fmt::format("'{}.{}' is required", section, key));
    }
    return resolve(base, j.at(key).get<std::string>());
  };
  p.load_forecast = required("load_forecast");
  p.load_actual = required("load_actual");
  if (j.contains("wind_forecast")) p.wind_forecast = path_list(j["wind_forecast"], base);
  if (j.contains("wind_actual")) p.wind_actual = path_list(j["wind_actual"], base);
  if (j.contains("solar_forecast")) p.solar_forecast = path_list(j["solar_forecast"], base);
  if (j.contains("solar_actual")) p.solar_actual = path_list(j["solar_actual"], base);
  if (p.wind_forecast.empty() != p.wind_actual.empty() ||
      p.solar_forecast.empty() != p.solar_actual.empty()) {
    throw Error(ErrorCode::Configuration,
                fmt::format("'{}': VRE drivers need both forecast and actual files", section));
  }
  if (j.contains("outages")) p.outages = resolve(base, j["outages"].get<std::string>());
  return p;
}

Timestamp parse_time_field(const json& j, const char* what) {
  const auto t = Timestamp::parse(j.get<std::string>());
  if (!t) throw Error(ErrorCode::Configuration, fmt::format("unparseable {} timestamp", what));
  return *t;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Configuration, fmt::format("config is not valid JSON: {}", e.what()));
  }
  RunConfig c;
  try {
    if (!j.contains("inputs")) throw Error(ErrorCode::Configuration, "'inputs' is required");
    c.inputs = parse_inputs(j["inputs"], base_dir, "inputs");
    if (j.contains("holdout")) c.holdout = parse_inputs(j["holdout"], base_dir, "holdout");
    c.forecast_resolution_minutes = j.value("forecast_resolution_minutes", 60);
    c.actual_resolution_minutes = j.value("actual_resolution_minutes", 1);
    c.interval_minutes = j.value("interval_minutes", 60);
    c.margin = j.value("margin", 0.99);
    c.output_dir = resolve(base_dir, j.value("output_dir", std::string("out")));
    if (j.contains("mode")) {
      const auto m = parse_sizing_mode(j["mode"].get<std::string>());
      if (!m) throw Error(ErrorCode::Configuration, "mode must be dynamic, static or baseline2pct");
      c.mode = *m;
    }
    if (j.contains("kde")) {
      const auto& k = j["kde"];
      c.kde.grid_step_mw = k.value("grid_step_mw", c.kde.grid_step_mw);
      c.kde.support_sigma = k.value("support_sigma", c.kde.support_sigma);
      if (k.contains("bandwidth_mw")) c.kde.bandwidth_override = k["bandwidth_mw"].get<double>();
    }
    if (j.contains("scenario")) {
      const auto& s = j["scenario"];
      for (Driver d : {Driver::Load, Driver::Wind, Driver::Solar}) {
        auto& ds = c.scenario.drivers[d];
        if (s.contains("growth_ratio")) ds.growth_ratio = s["growth_ratio"].value(driver_name(d), 1.0);
        if (s.contains("forecast_factor")) {
          ds.forecast_factor = s["forecast_factor"].value(driver_name(d), 1.0);
        }
      }
      if (s.contains("sweep_intervals")) {
        c.scenario.intervals = s["sweep_intervals"].get<std::vector<int>>();
      }
      const std::string anchor = s.value("anchor", std::string("persistence"));
      if (anchor == "persistence") c.scenario.anchor = ForecastAnchor::Persistence;
      else if (anchor == "interval_mean") c.scenario.anchor = ForecastAnchor::IntervalMean;
      else throw Error(ErrorCode::Configuration, "anchor must be persistence or interval_mean");
    }
    if (j.contains("outage_model")) {
      const auto& o = j["outage_model"];
      c.fop_floor = o.value("fop_floor", 0.0);
      const std::string conv = o.value("convention", std::string("capacity_lost"));
      if (conv == "capacity_lost") c.outage_convention = OutageConvention::CapacityLost;
      else if (conv == "literal") c.outage_convention = OutageConvention::Literal;
      else throw Error(ErrorCode::Configuration, "outage convention must be capacity_lost or literal");
      if (o.contains("period_start") && o.contains("period_end")) {
        c.outage_period = TimeSpan{parse_time_field(o["period_start"], "period_start"),
                                   parse_time_field(o["period_end"], "period_end")};
      }
    }
    if (j.contains("dump_clusters")) c.dump_clusters = j["dump_clusters"].get<std::vector<int>>();
    c.svg = j.value("svg", false);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Configuration, fmt::format("invalid config field: {}", e.what()));
  }
  c.scenario.margin = c.margin;
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

// ---------------------------------------------------------------- dataset

namespace {

void require_file(const fs::path& p) {
  if (!fs::exists(p)) {
    throw Error(ErrorCode::Io, fmt::format("input file '{}' does not exist", p.string()));
  }
}

SeriesFrame read_driver(const std::vector<fs::path>& files, Driver d, SignalKind kind, int res) {
  std::vector<SeriesFrame> plants;
  for (std::size_t i = 0; i < files.size(); ++i) {
    require_file(files[i]);
    plants.push_back(ingest_series(
        files[i], SignalDescriptor{d, files[i].stem().string(), kind, res}));
  }
  return plants.size() == 1 ? plants.front() : aggregate_series(plants);
}

}  // namespace

Dataset load_dataset(const InputPaths& paths, const RunConfig& config) {
  const int fr = config.forecast_resolution_minutes;
  const int ar = config.actual_resolution_minutes;
  Dataset d{read_driver({paths.load_forecast}, Driver::Load, SignalKind::Forecast, fr),
            read_driver({paths.load_actual}, Driver::Load, SignalKind::Actual, ar),
            std::nullopt, std::nullopt, std::nullopt, std::nullopt, {}};
  if (!paths.wind_forecast.empty()) {
    d.wind_forecast = read_driver(paths.wind_forecast, Driver::Wind, SignalKind::Forecast, fr);
    d.wind_actual = read_driver(paths.wind_actual, Driver::Wind, SignalKind::Actual, ar);
  }
  if (!paths.solar_forecast.empty()) {
    d.solar_forecast = read_driver(paths.solar_forecast, Driver::Solar, SignalKind::Forecast, fr);
    d.solar_actual = read_driver(paths.solar_actual, Driver::Solar, SignalKind::Actual, ar);
  }
  if (paths.outages) {
    require_file(*paths.outages);
    d.outages = ingest_outages(*paths.outages);
  }
  return d;
}

DriverErrorSets compute_error_sets(const Dataset& data, int interval_minutes) {
  DriverErrorSets sets;
  auto add = [&](const SeriesFrame& forecast, const SeriesFrame& actual) {
    const SeriesFrame f = forecast.resolution_minutes() < interval_minutes
                              ? resample_to_interval(forecast, interval_minutes)
                              : forecast;
    sets.forecast_of(actual.driver()) = compute_forecast_errors(f, actual, interval_minutes);
    if (actual.resolution_minutes() < interval_minutes) {
      sets.noise_of(actual.driver()) = compute_noise_errors(actual, interval_minutes);
    }
  };
  add(data.load_forecast, data.load_actual);
  if (data.wind_forecast) add(*data.wind_forecast, *data.wind_actual);
  if (data.solar_forecast) add(*data.solar_forecast, *data.solar_actual);
  return sets;
}

DiscreteDistribution dataset_outage_pdf(const Dataset& data, const RunConfig& config,
                                        std::vector<GeneratorOutageStats>* stats,
                                        std::vector<std::string>* warnings) {
  const double step = config.kde.grid_step_mw;
  if (data.outages.empty()) return DiscreteDistribution::point_mass(0.0, step);
  TimeSpan period;
  if (config.outage_period) {
    period = *config.outage_period;
  } else {
    const auto& pts = data.load_actual.points();
    if (pts.empty()) throw Error(ErrorCode::EmptyInput, "load actual series is empty");
    period = TimeSpan{pts.front().time,
                      pts.back().time + data.load_actual.resolution_minutes()};
  }
  OutageStatsResult r = compute_unit_stats(data.outages, period, config.fop_floor);
  if (warnings) warnings->insert(warnings->end(), r.warnings.begin(), r.warnings.end());
  if (stats) *stats = r.units;
  return total_outage_distribution(r.units, step, config.outage_convention);
}

// --------------------------------------------------------------- commands

namespace {

void scale_sets(DriverErrorSets& sets, const ScenarioSpec& spec) {
  for (int k = 0; k < 3; ++k) {
    if (sets.forecast[k]) sets.forecast[k] = scale_samples(*sets.forecast[k], spec);
    if (sets.noise[k]) sets.noise[k] = scale_samples(*sets.noise[k], spec);
  }
}

void emit(CommandResult& r, const fs::path& path, const std::string& content) {
  detail::write_text_file(path, content);
  r.files.push_back(path);
}

// Largest hourly load forecast observed in each hour-of-week.
std::vector<double> cluster_forecast_demand(const SeriesFrame& load_forecast) {
  std::vector<double> peak(ClusterKey::kCount, -1.0);
  for (const auto& p : load_forecast.points()) {
    auto& v = peak[ClusterKey::of(p.time).index()];
    v = std::max(v, p.value_mw);
  }
  for (std::size_t i = 0; i < peak.size(); ++i) {
    if (peak[i] < 0.0) {
      throw Error(ErrorCode::Configuration,
                  fmt::format("no load forecast for cluster {}", i + 1));
    }
  }
  return peak;
}

PeakForecasts peak_forecasts(const Dataset& data) {
  PeakForecasts p;
  p.peak_forecast_mw[static_cast<int>(Driver::Load)] = data.load_forecast.max_value();
  if (data.wind_forecast) p.peak_forecast_mw[static_cast<int>(Driver::Wind)] = data.wind_forecast->max_value();
  if (data.solar_forecast) p.peak_forecast_mw[static_cast<int>(Driver::Solar)] = data.solar_forecast->max_value();
  // Sizing for the historical period itself: base equals the observed peak.
  p.base_peak_mw = p.peak_forecast_mw;
  return p;
}

DynamicSizingOptions sizing_options(const RunConfig& config, bool keep_pdfs) {
  DynamicSizingOptions o;
  o.kde = config.kde;
  o.keep_pdfs = keep_pdfs;
  return o;
}

std::vector<ReserveRequirement> class_requirements(const DynamicSizingResult& r, ReserveClass c) {
  std::vector<ReserveRequirement> out;
  for (const auto& cs : r.clusters) {
    out.push_back(c == ReserveClass::Total       ? cs.total
                  : c == ReserveClass::Secondary ? cs.secondary
                                                 : cs.tertiary);
  }
  return out;
}

void dump_distributions(CommandResult& result, const RunConfig& config,
                        const DynamicSizingResult& sized) {
  std::vector<int> clusters = config.dump_clusters;
  if (clusters.empty()) {
    const auto it = std::max_element(sized.clusters.begin(), sized.clusters.end(),
                                     [](const ClusterSizing& a, const ClusterSizing& b) {
                                       return a.total.up_mw < b.total.up_mw;
                                     });
    clusters.push_back(it->cluster.value());
  }
  const fs::path dir = config.output_dir / "distributions";
  for (int c : clusters) {
    const ClusterSizing& cs = sized.at(ClusterKey(c));
    const auto prefix = fmt::format("cluster_{:03d}_", c);
    for (Driver d : {Driver::Load, Driver::Wind, Driver::Solar}) {
      const int k = static_cast<int>(d);
      emit(result, dir / (prefix + "forecast_" + driver_name(d) + ".csv"),
           distribution_to_csv(*cs.driver_pdfs->forecast[k]));
      emit(result, dir / (prefix + "noise_" + driver_name(d) + ".csv"),
           distribution_to_csv(*cs.driver_pdfs->noise[k]));
    }
    emit(result, dir / (prefix + "outage_total.csv"), distribution_to_csv(*cs.driver_pdfs->outage));
    emit(result, dir / (prefix + "total_reserve.csv"), distribution_to_csv(*cs.total_pdf));
    emit(result, dir / (prefix + "secondary_reserve.csv"), distribution_to_csv(*cs.secondary_pdf));
  }
}

}  // namespace

CommandResult cmd_errors(const RunConfig& config) {
  config.validate();
  const Dataset data = load_dataset(config.inputs, config);
  const DriverErrorSets sets = compute_error_sets(data, config.interval_minutes);
  CommandResult r;
  std::string report;
  for (int k = 0; k < 3; ++k) {
    for (const auto* set : {&sets.forecast[k], &sets.noise[k]}) {
      if (!*set) continue;
      const auto& s = **set;
      emit(r, config.output_dir / fmt::format("errors_{}_{}.csv", driver_name(s.driver),
                                              error_kind_name(s.kind)),
           error_samples_to_csv(s));
      report += sign_convention_check(s).to_text();
      r.summary += fmt::format("{} {} errors: {} samples in {} clusters\n", driver_name(s.driver),
                               error_kind_name(s.kind), s.total_count(), s.samples.size());
    }
  }
  emit(r, config.output_dir / "errors_report.txt", report);
  return r;
}

CommandResult cmd_size(const RunConfig& config) {
  config.validate();
  const Dataset data = load_dataset(config.inputs, config);
  const ReliabilityPolicy policy = ReliabilityPolicy::symmetric(config.margin);
  CommandResult r;

  if (config.mode == SizingMode::Baseline2Pct) {
    const auto demand = cluster_forecast_demand(data.load_forecast);
    std::string csv = "cluster_key,forecast_demand_mw,up_mw,down_mw\n";
    double mean_up = 0.0;
    for (std::size_t i = 0; i < demand.size(); ++i) {
      const UpDown b = regulating_reserve_baseline(demand[i]);
      csv += fmt::format("{},{:.3f},{:.3f},{:.3f}\n", i + 1, demand[i], b.up_mw, b.down_mw);
      mean_up += b.up_mw / static_cast<double>(demand.size());
    }
    emit(r, config.output_dir / "requirements_baseline2pct.csv", csv);
    r.summary = fmt::format("baseline2pct: mean regulating reserve +/-{:.1f} MW\n", mean_up);
    return r;
  }

  DriverErrorSets sets = compute_error_sets(data, config.interval_minutes);
  scale_sets(sets, config.scenario);
  std::vector<GeneratorOutageStats> stats;
  const DiscreteDistribution outage = dataset_outage_pdf(data, config, &stats, &r.warnings);
  emit(r, config.output_dir / "outage_stats.csv", outage_stats_to_csv(stats));
  const StaticSizingResult st =
      size_static(sets, peak_forecasts(data), outage, policy, config.kde);
  r.warnings.insert(r.warnings.end(), st.warnings.begin(), st.warnings.end());

  if (config.mode == SizingMode::Static) {
    emit(r, config.output_dir / "requirements_static.csv",
         requirements_to_csv({st.total, st.secondary, st.tertiary}, config.margin));
    r.summary = fmt::format(
        "static: total +{:.1f}/-{:.1f} MW, secondary +{:.1f}/-{:.1f} MW, tertiary "
        "+{:.1f}/-{:.1f} MW\n",
        st.total.up_mw, st.total.down_mw, st.secondary.up_mw, st.secondary.down_mw,
        st.tertiary.up_mw, st.tertiary.down_mw);
    return r;
  }

  const DynamicSizingResult sized =
      size_dynamic(sets, outage, policy, sizing_options(config, true));
  r.warnings.insert(r.warnings.end(), sized.warnings.begin(), sized.warnings.end());
  for (ReserveClass c : {ReserveClass::Total, ReserveClass::Secondary, ReserveClass::Tertiary}) {
    emit(r, config.output_dir / fmt::format("requirements_{}.csv", reserve_class_name(c)),
         requirements_to_csv(class_requirements(sized, c), config.margin));
  }

  const auto demand = cluster_forecast_demand(data.load_forecast);
  std::string cmp =
      "cluster_key,forecast_demand_mw,dynamic_up_mw,dynamic_down_mw,static_up_mw,"
      "static_down_mw,baseline_up_mw,baseline_down_mw\n";
  std::vector<ComparisonPoint> chart;
  for (const auto& cs : sized.clusters) {
    const double fd = demand[cs.cluster.index()];
    const UpDown b = regulating_reserve_baseline(fd);
    cmp += fmt::format("{},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f}\n",
                       cs.cluster.value(), fd, cs.secondary.up_mw, cs.secondary.down_mw,
                       st.secondary.up_mw, st.secondary.down_mw, b.up_mw, b.down_mw);
    chart.push_back({cs.cluster.value(), cs.secondary.up_mw, cs.secondary.down_mw,
                     st.secondary.up_mw, st.secondary.down_mw, b.up_mw, b.down_mw});
  }
  emit(r, config.output_dir / "comparison.csv", cmp);
  if (config.svg) emit(r, config.output_dir / "comparison.svg", comparison_svg(chart));
  dump_distributions(r, config, sized);

  r.summary = fmt::format(
      "dynamic ({} clusters, margin {}): mean total +{:.1f}/-{:.1f} MW, secondary "
      "+{:.1f}/-{:.1f} MW, tertiary +{:.1f}/-{:.1f} MW; static secondary +{:.1f}/-{:.1f} MW\n",
      sized.clusters.size(), config.margin, sized.mean_up(ReserveClass::Total),
      sized.mean_down(ReserveClass::Total), sized.mean_up(ReserveClass::Secondary),
      sized.mean_down(ReserveClass::Secondary), sized.mean_up(ReserveClass::Tertiary),
      sized.mean_down(ReserveClass::Tertiary), st.secondary.up_mw, st.secondary.down_mw);
  return r;
}

CommandResult cmd_sweep(const RunConfig& config) {
  config.validate();
  const Dataset data = load_dataset(config.inputs, config);
  CommandResult r;
  SweepInputs inputs{data.load_actual, data.wind_actual, data.solar_actual,
                     dataset_outage_pdf(data, config, nullptr, &r.warnings)};
  ScenarioSpec spec = config.scenario;
  spec.margin = config.margin;
  const SweepResult sweep = run_resolution_sweep(inputs, spec, config.kde);
  r.warnings.insert(r.warnings.end(), sweep.warnings.begin(), sweep.warnings.end());
  emit(r, config.output_dir / "sweep.csv", sweep.to_csv());
  for (const auto& row : sweep.rows) {
    r.summary += fmt::format("{:>2}-min: down {:.1f} MW ({:+.1f}%), up {:.1f} MW ({:+.1f}%)\n",
                             row.interval_minutes, row.mean_down_mw, row.down_reduction_pct,
                             row.mean_up_mw, row.up_reduction_pct);
  }
  return r;
}

CommandResult cmd_backtest(const RunConfig& config) {
  config.validate();
  if (!config.holdout) {
    throw Error(ErrorCode::Io, "holdout inputs are not configured");
  }
  const Dataset train = load_dataset(config.inputs, config);
  const Dataset holdout = load_dataset(*config.holdout, config);
  const ReliabilityPolicy policy = ReliabilityPolicy::symmetric(config.margin);
  CommandResult r;

  std::vector<ReserveRequirement> total, secondary;
  if (config.mode == SizingMode::Baseline2Pct) {
    const auto demand = cluster_forecast_demand(train.load_forecast);
    for (std::size_t i = 0; i < demand.size(); ++i) {
      const UpDown b = regulating_reserve_baseline(demand[i]);
      const ClusterKey key(static_cast<int>(i) + 1);
      total.push_back({key, ReserveClass::Total, b.up_mw, b.down_mw});
      secondary.push_back({key, ReserveClass::Secondary, b.up_mw, b.down_mw});
    }
  } else {
    DriverErrorSets sets = compute_error_sets(train, config.interval_minutes);
    scale_sets(sets, config.scenario);
    const DiscreteDistribution outage = dataset_outage_pdf(train, config, nullptr, &r.warnings);
    if (config.mode == SizingMode::Static) {
      const StaticSizingResult st =
          size_static(sets, peak_forecasts(train), outage, policy, config.kde);
      total.push_back(st.total);
      secondary.push_back(st.secondary);
    } else {
      const DynamicSizingResult sized =
          size_dynamic(sets, outage, policy, sizing_options(config, false));
      total = class_requirements(sized, ReserveClass::Total);
      secondary = class_requirements(sized, ReserveClass::Secondary);
    }
  }

  const DriverErrorSets held = compute_error_sets(holdout, config.interval_minutes);
  CoverageReport report;
  report.classes.push_back(evaluate_coverage(
      total, realized_imbalances(held, holdout.outages, config.interval_minutes, ReserveClass::Total),
      config.margin));
  report.classes.push_back(evaluate_coverage(
      secondary,
      realized_imbalances(held, holdout.outages, config.interval_minutes, ReserveClass::Secondary),
      config.margin));
  emit(r, config.output_dir / "coverage.csv", report.to_csv());
  emit(r, config.output_dir / "coverage.txt", report.to_text());
  r.summary = report.to_text();
  return r;
}

}  // namespace fcas
