// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fcas/fcas.h"

namespace {

int exit_code(fcas_status s) {
  switch (s) {
    case FCAS_OK: return 0;
    case FCAS_ERR_IO: return 2;
    case FCAS_ERR_EMPTY_INPUT: return 3;
    case FCAS_ERR_CONFIGURATION:
    case FCAS_ERR_PARAMETER:
    case FCAS_ERR_INVALID_ARGUMENT: return 4;
    case FCAS_ERR_INTERNAL: return 1;
    default: return 5;
  }
}

int fail(fcas_status s) {
  std::fprintf(stderr, "fcas: error[%s]: %s\n", fcas_status_name(s), fcas_last_error());
  return exit_code(s);
}

struct Overrides {
  std::string config;
  std::optional<double> margin;
  std::optional<int> interval;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::vector<int> sweep_intervals;
  bool svg = false;
};

int run(const Overrides& o, fcas_status (*command)(const fcas_config*, char**)) {
  fcas_config* cfg = nullptr;
  if (auto s = fcas_config_load(o.config.c_str(), &cfg); s != FCAS_OK) return fail(s);
  fcas_status s = FCAS_OK;
  if (o.margin) s = fcas_config_set_margin(cfg, *o.margin);
  if (s == FCAS_OK && o.interval) s = fcas_config_set_interval(cfg, *o.interval);
  if (s == FCAS_OK && o.out) s = fcas_config_set_output_dir(cfg, o.out->c_str());
  if (s == FCAS_OK && o.mode) s = fcas_config_set_mode(cfg, o.mode->c_str());
  if (s == FCAS_OK && !o.sweep_intervals.empty()) {
    s = fcas_config_set_sweep_intervals(cfg, o.sweep_intervals.data(), o.sweep_intervals.size());
  }
  if (s == FCAS_OK && o.svg) s = fcas_config_set_svg(cfg, 1);
  char* summary = nullptr;
  if (s == FCAS_OK) s = command(cfg, &summary);
  fcas_config_free(cfg);
  if (s != FCAS_OK) return fail(s);
  std::fputs(summary, stdout);
  fcas_string_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic reserve sizing from forecast errors, noise and generator outages"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration");
  app.add_option("--margin", o.margin, "reliability margin in (0, 1)");
  app.add_option("--interval", o.interval, "sizing interval in minutes (5, 15, 30, 60)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--mode", o.mode, "dynamic, static or baseline2pct");

  std::uint64_t seed = 1;
  int days = 28;
  int holdout_days = 0;
  std::string fixture_dir;
  app.add_option("--seed", seed, "fixture random seed");

  auto* errors = app.add_subcommand("errors", "write forecast and noise error samples");
  auto* size = app.add_subcommand("size", "size reserves per hour-of-week cluster");
  size->add_flag("--svg", o.svg, "also write an SVG comparison chart");
  auto* sweep = app.add_subcommand("sweep", "compare reserves across scheduling intervals");
  sweep->add_option("--intervals", o.sweep_intervals, "intervals to evaluate, in minutes")
      ->delimiter(',');
  auto* backtest = app.add_subcommand("backtest", "check coverage on the holdout dataset");
  auto* fixture = app.add_subcommand("fixture", "write a seeded synthetic dataset");
  fixture->add_option("dir", fixture_dir, "target directory")->required();
  fixture->add_option("--days", days, "training days");
  fixture->add_option("--holdout-days", holdout_days, "holdout days following training");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "fcas: error[usage]: %s\n", e.what());
    return 4;
  }

  if (fixture->parsed()) {
    char* path = nullptr;
    const auto s = fcas_generate_fixture(fixture_dir.c_str(), seed, days, holdout_days, &path);
    if (s != FCAS_OK) return fail(s);
    std::printf("wrote %s\n", path);
    fcas_string_free(path);
    return 0;
  }

  if (o.config.empty()) {
    std::fprintf(stderr, "fcas: error[usage]: --config is required\n");
    return 4;
  }
  if (errors->parsed()) return run(o, fcas_run_errors);
  if (size->parsed()) return run(o, fcas_run_size);
  if (sweep->parsed()) return run(o, fcas_run_sweep);
  if (backtest->parsed()) return run(o, fcas_run_backtest);
  return 4;
}
