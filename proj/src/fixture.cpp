#include "fcas/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "fcas/error.hpp"
#include "text_util.hpp"

namespace fcas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double load_profile(const FixtureOptions& o, Timestamp t) {
  const double mod = t.minute_of_day();
  const double weekend = t.day_of_week() >= 5 ? 0.9 : 1.0;
  return weekend * (o.load_base_mw + o.load_swing_mw * std::sin(kTwoPi * (mod - 480.0) / 1440.0));
}

double solar_profile(const FixtureOptions& o, Timestamp t) {
  const double mod = t.minute_of_day();
  if (mod <= 360.0 || mod >= 1080.0) return 0.0;
  return o.solar_peak_mw * std::sin(std::numbers::pi * (mod - 360.0) / 720.0);
}

SignalDescriptor signal(Driver d, SignalKind k, int res) {
  return SignalDescriptor{d, {}, k, res};
}

}  // namespace

Dataset generate_fixture(const FixtureOptions& o) {
  if (o.days <= 0) throw Error(ErrorCode::Parameter, "fixture needs at least one day");
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const int hours = o.days * 24;
  const double phi = o.load_noise_half_life_min > 0.0
                         ? std::pow(0.5, 1.0 / o.load_noise_half_life_min)
                         : 0.0;
  const double innovation = std::sqrt(1.0 - phi * phi);

  std::vector<SeriesPoint> lf, la, wf, wa, sf, sa;
  lf.reserve(hours);
  la.reserve(static_cast<std::size_t>(hours) * 60);
  double ar = normal(rng);
  for (int h = 0; h < hours; ++h) {
    const Timestamp hour_start = o.start + static_cast<std::int64_t>(h) * 60;

    double load_mean = 0.0, solar_mean = 0.0;
    for (int m = 0; m < 60; ++m) {
      load_mean += load_profile(o, hour_start + m);
      solar_mean += solar_profile(o, hour_start + m);
    }
    load_mean /= 60.0;
    solar_mean /= 60.0;
    const double wind_forecast =
        o.wind_mean_mw + 0.4 * o.wind_mean_mw * std::sin(kTwoPi * h / 72.0);

    const double load_err = o.load_forecast_sigma_mw * normal(rng);
    const double wind_err = o.wind_forecast_sigma_mw * normal(rng);
    const double solar_err = o.solar_forecast_rel_sigma * normal(rng);
    lf.push_back({hour_start, load_mean});
    if (o.with_wind) wf.push_back({hour_start, wind_forecast});
    if (o.with_solar) sf.push_back({hour_start, solar_mean});

    for (int m = 0; m < 60; ++m) {
      const Timestamp t = hour_start + m;
      ar = phi * ar + innovation * normal(rng);
      const double load_noise =
          o.load_noise_sigma_mw * (phi > 0.0 ? ar : normal(rng));
      la.push_back({t, std::max(0.0, load_profile(o, t) + load_err + load_noise)});
      if (o.with_wind) {
        const double v = wind_forecast + wind_err + o.wind_noise_sigma_mw * normal(rng);
        wa.push_back({t, std::clamp(v, 0.0, 2.5 * o.wind_mean_mw)});
      }
      if (o.with_solar) {
        const double s = solar_profile(o, t);
        const double v = s * (1.0 + solar_err + o.solar_noise_rel_sigma * normal(rng));
        sa.push_back({t, std::max(0.0, v)});
      }
    }
  }

  std::vector<OutageRecord> outages;
  std::uniform_int_distribution<int> minute(0, 59);
  std::exponential_distribution<double> repair(1.0 / std::max(1.0, o.mean_repair_hours - 1.0));
  for (int u = 0; u < o.units; ++u) {
    const double span = (o.unit_max_mw - o.unit_min_mw) / 10.0;
    const double rated = o.unit_min_mw + 10.0 * std::floor(uniform(rng) * (span + 1.0));
    const std::string id = "G" + std::to_string(u + 1);
    std::int64_t busy_until = o.start.minutes();
    for (int h = 0; h < hours; ++h) {
      const std::int64_t hour_start = o.start.minutes() + static_cast<std::int64_t>(h) * 60;
      const bool starts = uniform(rng) < o.unit_start_probability;
      if (!starts || hour_start < busy_until) continue;
      const Timestamp s(hour_start + minute(rng));
      const auto dur = static_cast<std::int64_t>(std::llround((1.0 + repair(rng)) * 60.0));
      outages.push_back({id, rated, s, s + dur, OutageCause::Forced});
      busy_until = (s + dur).minutes();
    }
    if (u == 0 && o.days > 12) {
      const Timestamp s = o.start + 10 * 1440;
      outages.push_back({id, rated, s, s + 48 * 60, OutageCause::Planned});
    }
  }
  std::sort(outages.begin(), outages.end(), [](const OutageRecord& a, const OutageRecord& b) {
    return a.start != b.start ? a.start < b.start : a.unit_id < b.unit_id;
  });

  Dataset d{SeriesFrame(signal(Driver::Load, SignalKind::Forecast, 60), std::move(lf)),
            SeriesFrame(signal(Driver::Load, SignalKind::Actual, 1), std::move(la)),
            std::nullopt,
            std::nullopt,
            std::nullopt,
            std::nullopt,
            std::move(outages)};
  if (o.with_wind) {
    d.wind_forecast = SeriesFrame(signal(Driver::Wind, SignalKind::Forecast, 60), std::move(wf));
    d.wind_actual = SeriesFrame(signal(Driver::Wind, SignalKind::Actual, 1), std::move(wa));
  }
  if (o.with_solar) {
    d.solar_forecast =
        SeriesFrame(signal(Driver::Solar, SignalKind::Forecast, 60), std::move(sf));
    d.solar_actual = SeriesFrame(signal(Driver::Solar, SignalKind::Actual, 1), std::move(sa));
  }
  return d;
}

namespace {

nlohmann::json write_dataset(const std::filesystem::path& root, const std::string& sub,
                             const Dataset& d) {
  nlohmann::json inputs;
  auto put = [&](const char* key, const SeriesFrame& s, bool as_list) {
    const std::string rel = sub + "/" + key + ".csv";
    write_series(s, root / rel);
    if (as_list) inputs[key] = nlohmann::json::array({rel});
    else inputs[key] = rel;
  };
  put("load_forecast", d.load_forecast, false);
  put("load_actual", d.load_actual, false);
  if (d.wind_forecast) put("wind_forecast", *d.wind_forecast, true);
  if (d.wind_actual) put("wind_actual", *d.wind_actual, true);
  if (d.solar_forecast) put("solar_forecast", *d.solar_forecast, true);
  if (d.solar_actual) put("solar_actual", *d.solar_actual, true);
  const std::string outages = sub + "/outages.csv";
  detail::write_text_file(root / outages, serialize_outages(d.outages));
  inputs["outages"] = outages;
  return inputs;
}

}  // namespace

FixtureFiles write_fixture(const std::filesystem::path& dir, const FixtureOptions& options,
                           int holdout_days) {
  nlohmann::json config;
  config["inputs"] = write_dataset(dir, "train", generate_fixture(options));
  if (holdout_days > 0) {
    FixtureOptions h = options;
    h.seed = options.seed + 1;
    h.start = options.start + static_cast<std::int64_t>(options.days) * 1440;
    h.days = holdout_days;
    config["holdout"] = write_dataset(dir, "holdout", generate_fixture(h));
  }
  config["forecast_resolution_minutes"] = 60;
  config["actual_resolution_minutes"] = 1;
  config["interval_minutes"] = 60;
  config["margin"] = 0.99;
  config["output_dir"] = "out";
  config["mode"] = "dynamic";
  config["kde"] = {{"grid_step_mw", 0.5}, {"support_sigma", 6.0}};
  config["scenario"] = {{"sweep_intervals", {60, 30, 15, 5}}, {"anchor", "persistence"}};
  const auto path = dir / "config.json";
  detail::write_text_file(path, config.dump(2) + "\n");
  return FixtureFiles{path};
}

}  // namespace fcas
