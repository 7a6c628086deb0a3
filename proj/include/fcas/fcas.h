/* C interface to the reserve sizing library. Every function returns an
 * fcas_status; on failure fcas_last_error() describes the most recent error
 * raised on the calling thread. Handles are opaque and owned by the caller. */
#ifndef FCAS_FCAS_H
#define FCAS_FCAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FCAS_API __declspec(dllexport)
#else
#define FCAS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fcas_status {
  FCAS_OK = 0,
  FCAS_ERR_IO = 1,
  FCAS_ERR_SCHEMA = 2,
  FCAS_ERR_ORDERING = 3,
  FCAS_ERR_DATA_QUALITY = 4,
  FCAS_ERR_VALIDATION = 5,
  FCAS_ERR_PARAMETER = 6,
  FCAS_ERR_INSUFFICIENT_DATA = 7,
  FCAS_ERR_GRID_INCOMPATIBILITY = 8,
  FCAS_ERR_CONFIGURATION = 9,
  FCAS_ERR_EMPTY_INPUT = 10,
  FCAS_ERR_DATA_INCONSISTENCY = 11,
  FCAS_ERR_INVALID_ARGUMENT = 12, /* null handle or pointer */
  FCAS_ERR_INTERNAL = 13
} fcas_status;

/* Short kebab-case name of a status, e.g. "data-quality". */
FCAS_API const char* fcas_status_name(fcas_status status);

/* Message of the last failure on this thread; "" if none. */
FCAS_API const char* fcas_last_error(void);

/* Strings returned by the library are released with fcas_string_free. */
FCAS_API void fcas_string_free(char* s);

/* ---- discrete distributions ---------------------------------------- */

typedef struct fcas_distribution fcas_distribution;

/* Masses on origin + i * step, i = 0..count-1; must be non-negative and sum
 * to 1 within 1e-9. */
FCAS_API fcas_status fcas_distribution_create(double origin, double step, const double* masses,
                                              size_t count, fcas_distribution** out);
FCAS_API void fcas_distribution_free(fcas_distribution* d);
FCAS_API fcas_status fcas_distribution_info(const fcas_distribution* d, double* origin,
                                            double* step, size_t* count);
/* Copies min(count, capacity) masses into buffer. */
FCAS_API fcas_status fcas_distribution_masses(const fcas_distribution* d, double* buffer,
                                              size_t capacity);
FCAS_API fcas_status fcas_distribution_moments(const fcas_distribution* d, double* mean,
                                               double* variance);
/* Smallest grid value whose cumulative mass reaches p, p in (0, 1). */
FCAS_API fcas_status fcas_quantile(const fcas_distribution* d, double p, double* out);

/* Gaussian KDE on a grid of the given step. bandwidth <= 0 selects the
 * rule-of-thumb bandwidth. */
FCAS_API fcas_status fcas_kde_estimate(const double* samples, size_t count, double grid_step,
                                       double bandwidth, fcas_distribution** out);
/* Writes 0 when the samples have zero spread. */
FCAS_API fcas_status fcas_silverman_bandwidth(const double* samples, size_t count, double* out);

FCAS_API fcas_status fcas_convolve(const fcas_distribution* a, const fcas_distribution* b,
                                   fcas_distribution** out);
FCAS_API fcas_status fcas_regrid(const fcas_distribution* d, double step,
                                 fcas_distribution** out);

/* ---- reliability and requirements ---------------------------------- */

/* Symmetric tail probabilities (1 - margin) / 2. */
FCAS_API fcas_status fcas_reliability_split(double margin, double* deficit, double* surplus);

FCAS_API fcas_status fcas_extract_requirements(const fcas_distribution* pdf, double margin,
                                               double* up_mw, double* down_mw);

/* 100 * (subhourly - hourly) / hourly. */
FCAS_API fcas_status fcas_reduction_pct(double hourly, double subhourly, double* out);

/* ---- generator outages --------------------------------------------- */

typedef struct fcas_unit {
  double rated_capacity_mw;
  double fop; /* forced outage probability per interval */
} fcas_unit;

/* Distribution of total capacity on outage; literal != 0 places the outage
 * probability at 0 MW instead of at the rated capacity. */
FCAS_API fcas_status fcas_outage_total(const fcas_unit* units, size_t count, double grid_step,
                                       int literal, fcas_distribution** out);

/* ---- run configuration and commands -------------------------------- */

typedef struct fcas_config fcas_config;

FCAS_API fcas_status fcas_config_load(const char* path, fcas_config** out);
/* base_dir resolves relative paths inside the JSON text. */
FCAS_API fcas_status fcas_config_parse(const char* json_text, const char* base_dir,
                                       fcas_config** out);
FCAS_API void fcas_config_free(fcas_config* c);
FCAS_API fcas_status fcas_config_set_margin(fcas_config* c, double margin);
FCAS_API fcas_status fcas_config_set_interval(fcas_config* c, int minutes);
FCAS_API fcas_status fcas_config_set_output_dir(fcas_config* c, const char* dir);
/* "dynamic", "static" or "baseline2pct". */
FCAS_API fcas_status fcas_config_set_mode(fcas_config* c, const char* mode);
FCAS_API fcas_status fcas_config_set_sweep_intervals(fcas_config* c, const int* minutes,
                                                     size_t count);
FCAS_API fcas_status fcas_config_set_svg(fcas_config* c, int enabled);
FCAS_API fcas_status fcas_config_validate(const fcas_config* c);

/* Each command writes its outputs under the configured output directory and
 * returns a human-readable summary (warnings included) in *summary. */
FCAS_API fcas_status fcas_run_errors(const fcas_config* c, char** summary);
FCAS_API fcas_status fcas_run_size(const fcas_config* c, char** summary);
FCAS_API fcas_status fcas_run_sweep(const fcas_config* c, char** summary);
FCAS_API fcas_status fcas_run_backtest(const fcas_config* c, char** summary);

/* Writes a seeded synthetic dataset and config.json into dir. */
FCAS_API fcas_status fcas_generate_fixture(const char* dir, uint64_t seed, int days,
                                           int holdout_days, char** config_path);

#ifdef __cplusplus
}
#endif

#endif /* FCAS_FCAS_H */
