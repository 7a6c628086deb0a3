#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fcas/backtest.hpp"
#include "fcas/distribution.hpp"
#include "fcas/fixture.hpp"
#include "fcas/outage_model.hpp"
#include "fcas/scenario.hpp"
#include "fcas/sizing.hpp"

namespace fcas {

enum class SizingMode { Dynamic, Static, Baseline2Pct };

const char* sizing_mode_name(SizingMode m);
std::optional<SizingMode> parse_sizing_mode(std::string_view s);

// Input file locations. VRE entries list one file per plant; plants are summed
// to grid totals. An empty list means the driver is absent.
struct InputPaths {
  std::filesystem::path load_forecast;
  std::filesystem::path load_actual;
  std::vector<std::filesystem::path> wind_forecast;
  std::vector<std::filesystem::path> wind_actual;
  std::vector<std::filesystem::path> solar_forecast;
  std::vector<std::filesystem::path> solar_actual;
  std::optional<std::filesystem::path> outages;
};

struct RunConfig {
  InputPaths inputs;
  std::optional<InputPaths> holdout;
  int forecast_resolution_minutes = 60;
  int actual_resolution_minutes = 1;
  int interval_minutes = 60;
  double margin = 0.99;
  ScenarioSpec scenario;
  std::filesystem::path output_dir = "out";
  SizingMode mode = SizingMode::Dynamic;
  KdeConfig kde;
  double fop_floor = 0.0;
  OutageConvention outage_convention = OutageConvention::CapacityLost;
  std::optional<TimeSpan> outage_period;
  std::vector<int> dump_clusters;  // empty: the cluster with the largest total up
  bool svg = false;

  // Throws Configuration on any violated constraint.
  void validate() const;
};

// Parses a JSON config; relative paths resolve against the config's directory.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir);

// Reads every configured series and the outage list.
Dataset load_dataset(const InputPaths& paths, const RunConfig& config);

struct CommandResult {
  std::string summary;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

// Forecast and noise errors for every present driver at config.interval_minutes.
DriverErrorSets compute_error_sets(const Dataset& data, int interval_minutes);

// Outage distribution of the dataset over the configured (or inferred) period.
DiscreteDistribution dataset_outage_pdf(const Dataset& data, const RunConfig& config,
                                        std::vector<GeneratorOutageStats>* stats = nullptr,
                                        std::vector<std::string>* warnings = nullptr);

CommandResult cmd_errors(const RunConfig& config);
CommandResult cmd_size(const RunConfig& config);
CommandResult cmd_sweep(const RunConfig& config);
CommandResult cmd_backtest(const RunConfig& config);

}  // namespace fcas
