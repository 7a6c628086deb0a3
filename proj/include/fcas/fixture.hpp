#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "fcas/data_model.hpp"

namespace fcas {

// A complete input dataset: hourly forecasts, per-minute actuals, outages.
struct Dataset {
  SeriesFrame load_forecast;
  SeriesFrame load_actual;
  std::optional<SeriesFrame> wind_forecast;
  std::optional<SeriesFrame> wind_actual;
  std::optional<SeriesFrame> solar_forecast;
  std::optional<SeriesFrame> solar_actual;
  std::vector<OutageRecord> outages;
};

// Synthetic grid: diurnal load with normal hourly forecast errors and white
// minute noise, wind and solar with normal errors, Bernoulli forced outage
// starts per unit and hour.
struct FixtureOptions {
  std::uint64_t seed = 1;
  Timestamp start = Timestamp::from_civil(2018, 1, 1);  // a Monday
  int days = 28;

  double load_base_mw = 1000.0;
  double load_swing_mw = 250.0;
  double load_forecast_sigma_mw = 20.0;
  double load_noise_sigma_mw = 8.0;
  // AR(1) minute noise half-life; 0 keeps the noise white.
  double load_noise_half_life_min = 0.0;

  bool with_wind = true;
  double wind_mean_mw = 60.0;
  double wind_forecast_sigma_mw = 8.0;
  double wind_noise_sigma_mw = 2.0;

  bool with_solar = true;
  double solar_peak_mw = 200.0;
  double solar_forecast_rel_sigma = 0.05;
  double solar_noise_rel_sigma = 0.01;

  int units = 12;
  double unit_min_mw = 50.0;
  double unit_max_mw = 150.0;
  double unit_start_probability = 0.002;  // per unit and hour
  double mean_repair_hours = 12.0;
};

Dataset generate_fixture(const FixtureOptions& options);

struct FixtureFiles {
  std::filesystem::path config;
};

// Writes the training dataset (and an optional holdout dataset that starts
// right after it, generated with seed + 1) as CSV files plus config.json.
FixtureFiles write_fixture(const std::filesystem::path& dir, const FixtureOptions& options,
                           int holdout_days = 0);

}  // namespace fcas
