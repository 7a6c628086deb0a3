#pragma once

#include <map>
#include <string>
#include <vector>

#include "fcas/data_model.hpp"

namespace fcas {

enum class ErrorKind { Forecast, Noise };

const char* error_kind_name(ErrorKind k);

struct ErrorSample {
  Timestamp time;  // interval start (forecast errors) or sample time (noise errors)
  double error_mw = 0.0;
};

// Error samples of one driver and kind, clustered by hour-of-week.
//
// Values follow the raw convention error = actual - reference: a positive
// load error is an under-forecast of demand, a positive VRE error is
// over-delivery. Use imbalance_values() for the shortage-positive axis used in
// sizing.
struct ErrorSampleSet {
  Driver driver = Driver::Load;
  ErrorKind kind = ErrorKind::Forecast;
  std::map<ClusterKey, std::vector<ErrorSample>> samples;

  std::size_t total_count() const;
  // All samples across clusters, in timestamp order within each cluster.
  std::vector<double> all_values() const;
};

// +1 for load, -1 for wind and solar: positive imbalance demands upward reserve.
double imbalance_sign(Driver d);

// Cluster samples mapped to the shortage-positive imbalance axis.
std::vector<double> imbalance_values(const ErrorSampleSet& set, ClusterKey cluster);
std::vector<double> imbalance_values(const ErrorSampleSet& set);

// error = (interval mean of actual) - forecast, for each complete interval.
ErrorSampleSet compute_forecast_errors(const SeriesFrame& forecast, const SeriesFrame& actual,
                                       int interval_minutes);

// error = actual - interval mean, one per actual sample of each complete interval.
ErrorSampleSet compute_noise_errors(const SeriesFrame& actual, int interval_minutes);

struct ClusterDiagnostic {
  ClusterKey cluster;
  std::size_t count = 0;
  double mean = 0.0;
  double skew = 0.0;
};

struct SignConventionReport {
  Driver driver = Driver::Load;
  ErrorKind kind = ErrorKind::Forecast;
  std::size_t count = 0;
  double mean = 0.0;
  double skew = 0.0;
  std::vector<ClusterDiagnostic> clusters;  // empty clusters omitted
  std::vector<std::string> flags;
  std::string convention;

  std::string to_text() const;
};

SignConventionReport sign_convention_check(const ErrorSampleSet& set);

// "cluster_key,timestamp,driver,kind,error_mw" rows, raw sign convention.
std::string error_samples_to_csv(const ErrorSampleSet& set);

}  // namespace fcas
