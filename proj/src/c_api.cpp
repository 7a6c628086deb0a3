#include "fcas/fcas.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "fcas/distribution.hpp"
#include "fcas/error.hpp"
#include "fcas/fixture.hpp"
#include "fcas/outage_model.hpp"
#include "fcas/pipeline.hpp"
#include "fcas/scenario.hpp"
#include "fcas/sizing.hpp"

struct fcas_distribution {
  fcas::DiscreteDistribution value;
};

struct fcas_config {
  fcas::RunConfig value;
};

namespace {

thread_local std::string g_last_error;

fcas_status to_status(fcas::ErrorCode code) {
  using fcas::ErrorCode;
  switch (code) {
    case ErrorCode::Io: return FCAS_ERR_IO;
    case ErrorCode::Schema: return FCAS_ERR_SCHEMA;
    case ErrorCode::Ordering: return FCAS_ERR_ORDERING;
    case ErrorCode::DataQuality: return FCAS_ERR_DATA_QUALITY;
    case ErrorCode::Validation: return FCAS_ERR_VALIDATION;
    case ErrorCode::Parameter: return FCAS_ERR_PARAMETER;
    case ErrorCode::InsufficientData: return FCAS_ERR_INSUFFICIENT_DATA;
    case ErrorCode::GridIncompatibility: return FCAS_ERR_GRID_INCOMPATIBILITY;
    case ErrorCode::Configuration: return FCAS_ERR_CONFIGURATION;
    case ErrorCode::EmptyInput: return FCAS_ERR_EMPTY_INPUT;
    case ErrorCode::DataInconsistency: return FCAS_ERR_DATA_INCONSISTENCY;
  }
  return FCAS_ERR_INTERNAL;
}

template <typename F>
fcas_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return FCAS_OK;
  } catch (const fcas::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FCAS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FCAS_ERR_INTERNAL;
  }
}

fcas_status invalid(const char* what) {
  g_last_error = std::string(what) + " must not be null";
  return FCAS_ERR_INVALID_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string summary_text(const fcas::CommandResult& r) {
  constexpr std::size_t kShown = 5;
  std::string out = r.summary;
  for (std::size_t i = 0; i < r.warnings.size() && i < kShown; ++i) {
    out += "warning: " + r.warnings[i] + "\n";
  }
  if (r.warnings.size() > kShown) {
    out += "warning: " + std::to_string(r.warnings.size() - kShown) + " more warnings\n";
  }
  return out;
}

template <typename Cmd>
fcas_status run_command(const fcas_config* c, char** summary, Cmd cmd) {
  if (!c) return invalid("config");
  if (!summary) return invalid("summary");
  return guarded([&] { *summary = duplicate(summary_text(cmd(c->value))); });
}

fcas_status wrap(fcas::DiscreteDistribution d, fcas_distribution** out) {
  *out = new fcas_distribution{std::move(d)};
  return FCAS_OK;
}

}  // namespace

extern "C" {

const char* fcas_status_name(fcas_status status) {
  switch (status) {
    case FCAS_OK: return "ok";
    case FCAS_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case FCAS_ERR_INTERNAL: return "internal";
    default: break;
  }
  if (status >= FCAS_ERR_IO && status <= FCAS_ERR_DATA_INCONSISTENCY) {
    return fcas::error_code_name(static_cast<fcas::ErrorCode>(status - FCAS_ERR_IO));
  }
  return "unknown";
}

const char* fcas_last_error(void) { return g_last_error.c_str(); }

void fcas_string_free(char* s) { std::free(s); }

fcas_status fcas_distribution_create(double origin, double step, const double* masses,
                                     size_t count, fcas_distribution** out) {
  if (!masses && count > 0) return invalid("masses");
  if (!out) return invalid("out");
  return guarded([&] {
    wrap(fcas::DiscreteDistribution(origin, step, std::vector<double>(masses, masses + count)),
         out);
  });
}

void fcas_distribution_free(fcas_distribution* d) { delete d; }

fcas_status fcas_distribution_info(const fcas_distribution* d, double* origin, double* step,
                                   size_t* count) {
  if (!d) return invalid("distribution");
  if (origin) *origin = d->value.origin();
  if (step) *step = d->value.step();
  if (count) *count = d->value.size();
  return FCAS_OK;
}

fcas_status fcas_distribution_masses(const fcas_distribution* d, double* buffer,
                                     size_t capacity) {
  if (!d) return invalid("distribution");
  if (!buffer && capacity > 0) return invalid("buffer");
  const auto m = d->value.masses();
  std::copy_n(m.begin(), std::min(capacity, m.size()), buffer);
  return FCAS_OK;
}

fcas_status fcas_distribution_moments(const fcas_distribution* d, double* mean,
                                      double* variance) {
  if (!d) return invalid("distribution");
  if (mean) *mean = d->value.mean();
  if (variance) *variance = d->value.variance();
  return FCAS_OK;
}

fcas_status fcas_quantile(const fcas_distribution* d, double p, double* out) {
  if (!d) return invalid("distribution");
  if (!out) return invalid("out");
  return guarded([&] { *out = fcas::quantile(d->value, p); });
}

fcas_status fcas_kde_estimate(const double* samples, size_t count, double grid_step,
                              double bandwidth, fcas_distribution** out) {
  if (!samples && count > 0) return invalid("samples");
  if (!out) return invalid("out");
  return guarded([&] {
    fcas::KdeConfig cfg;
    cfg.grid_step_mw = grid_step;
    if (bandwidth > 0.0) cfg.bandwidth_override = bandwidth;
    wrap(fcas::kde_estimate({samples, count}, cfg), out);
  });
}

fcas_status fcas_silverman_bandwidth(const double* samples, size_t count, double* out) {
  if (!samples && count > 0) return invalid("samples");
  if (!out) return invalid("out");
  return guarded([&] { *out = fcas::silverman_bandwidth({samples, count}).value_or(0.0); });
}

fcas_status fcas_convolve(const fcas_distribution* a, const fcas_distribution* b,
                          fcas_distribution** out) {
  if (!a || !b) return invalid("distribution");
  if (!out) return invalid("out");
  return guarded([&] { wrap(fcas::convolve(a->value, b->value), out); });
}

fcas_status fcas_regrid(const fcas_distribution* d, double step, fcas_distribution** out) {
  if (!d) return invalid("distribution");
  if (!out) return invalid("out");
  return guarded([&] { wrap(fcas::regrid(d->value, step), out); });
}

fcas_status fcas_reliability_split(double margin, double* deficit, double* surplus) {
  if (!deficit || !surplus) return invalid("out");
  return guarded([&] {
    const auto p = fcas::ReliabilityPolicy::symmetric(margin);
    *deficit = p.deficit_probability;
    *surplus = p.surplus_probability;
  });
}

fcas_status fcas_extract_requirements(const fcas_distribution* pdf, double margin,
                                      double* up_mw, double* down_mw) {
  if (!pdf) return invalid("distribution");
  if (!up_mw || !down_mw) return invalid("out");
  return guarded([&] {
    const auto r =
        fcas::extract_requirements(pdf->value, fcas::ReliabilityPolicy::symmetric(margin));
    *up_mw = r.up_mw;
    *down_mw = r.down_mw;
  });
}

fcas_status fcas_reduction_pct(double hourly, double subhourly, double* out) {
  if (!out) return invalid("out");
  return guarded([&] { *out = fcas::reduction_percent(subhourly, hourly); });
}

fcas_status fcas_outage_total(const fcas_unit* units, size_t count, double grid_step,
                              int literal, fcas_distribution** out) {
  if (!units && count > 0) return invalid("units");
  if (!out) return invalid("out");
  return guarded([&] {
    std::vector<fcas::GeneratorOutageStats> stats(count);
    for (size_t i = 0; i < count; ++i) {
      stats[i].unit_id = "U" + std::to_string(i + 1);
      stats[i].rated_capacity_mw = units[i].rated_capacity_mw;
      stats[i].fop = units[i].fop;
    }
    wrap(fcas::total_outage_distribution(stats, grid_step,
                                         literal ? fcas::OutageConvention::Literal
                                                 : fcas::OutageConvention::CapacityLost),
         out);
  });
}

fcas_status fcas_config_load(const char* path, fcas_config** out) {
  if (!path) return invalid("path");
  if (!out) return invalid("out");
  return guarded([&] { *out = new fcas_config{fcas::load_run_config(path)}; });
}

fcas_status fcas_config_parse(const char* json_text, const char* base_dir, fcas_config** out) {
  if (!json_text) return invalid("json_text");
  if (!out) return invalid("out");
  return guarded([&] {
    *out = new fcas_config{fcas::parse_run_config(json_text, base_dir ? base_dir : ".")};
  });
}

void fcas_config_free(fcas_config* c) { delete c; }

fcas_status fcas_config_set_margin(fcas_config* c, double margin) {
  if (!c) return invalid("config");
  c->value.margin = margin;
  c->value.scenario.margin = margin;
  return FCAS_OK;
}

fcas_status fcas_config_set_interval(fcas_config* c, int minutes) {
  if (!c) return invalid("config");
  c->value.interval_minutes = minutes;
  return FCAS_OK;
}

fcas_status fcas_config_set_output_dir(fcas_config* c, const char* dir) {
  if (!c) return invalid("config");
  if (!dir) return invalid("dir");
  c->value.output_dir = dir;
  return FCAS_OK;
}

fcas_status fcas_config_set_mode(fcas_config* c, const char* mode) {
  if (!c) return invalid("config");
  if (!mode) return invalid("mode");
  const auto m = fcas::parse_sizing_mode(mode);
  if (!m) {
    g_last_error = std::string("unknown sizing mode '") + mode + "'";
    return FCAS_ERR_CONFIGURATION;
  }
  c->value.mode = *m;
  return FCAS_OK;
}

fcas_status fcas_config_set_sweep_intervals(fcas_config* c, const int* minutes, size_t count) {
  if (!c) return invalid("config");
  if (!minutes && count > 0) return invalid("minutes");
  c->value.scenario.intervals.assign(minutes, minutes + count);
  return FCAS_OK;
}

fcas_status fcas_config_set_svg(fcas_config* c, int enabled) {
  if (!c) return invalid("config");
  c->value.svg = enabled != 0;
  return FCAS_OK;
}

fcas_status fcas_config_validate(const fcas_config* c) {
  if (!c) return invalid("config");
  return guarded([&] { c->value.validate(); });
}

fcas_status fcas_run_errors(const fcas_config* c, char** summary) {
  return run_command(c, summary, fcas::cmd_errors);
}

fcas_status fcas_run_size(const fcas_config* c, char** summary) {
  return run_command(c, summary, fcas::cmd_size);
}

fcas_status fcas_run_sweep(const fcas_config* c, char** summary) {
  return run_command(c, summary, fcas::cmd_sweep);
}

fcas_status fcas_run_backtest(const fcas_config* c, char** summary) {
  return run_command(c, summary, fcas::cmd_backtest);
}

fcas_status fcas_generate_fixture(const char* dir, uint64_t seed, int days, int holdout_days,
                                  char** config_path) {
  if (!dir) return invalid("dir");
  return guarded([&] {
    fcas::FixtureOptions o;
    o.seed = seed;
    o.days = days;
    const auto files = fcas::write_fixture(dir, o, holdout_days);
    if (config_path) *config_path = duplicate(files.config.string());
  });
}

}  // extern "C"
