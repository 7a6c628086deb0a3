#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "fcas/fcas.h"

namespace fs = std::filesystem;

TEST_CASE("status names and last error") {
  CHECK(std::string(fcas_status_name(FCAS_OK)) == "ok");
  CHECK(std::string(fcas_status_name(FCAS_ERR_IO)) == "io");
  CHECK(std::string(fcas_status_name(FCAS_ERR_DATA_INCONSISTENCY)) == "data-inconsistency");
  CHECK(std::string(fcas_status_name(FCAS_ERR_INVALID_ARGUMENT)) == "invalid-argument");

  double d = 0, s = 0;
  CHECK(fcas_reliability_split(1.5, &d, &s) == FCAS_ERR_PARAMETER);
  CHECK(std::strlen(fcas_last_error()) > 0);
  CHECK(fcas_reliability_split(0.99, &d, &s) == FCAS_OK);
  CHECK(d == 0.005);
  CHECK(s == 0.005);
  CHECK(std::string(fcas_last_error()).empty());
  CHECK(fcas_reliability_split(0.99, nullptr, &s) == FCAS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("distribution handles") {
  const double masses[] = {0.9, 0.1};
  fcas_distribution* u = nullptr;
  REQUIRE(fcas_distribution_create(0.0, 100.0, masses, 2, &u) == FCAS_OK);
  fcas_distribution* uu = nullptr;
  REQUIRE(fcas_convolve(u, u, &uu) == FCAS_OK);
  size_t n = 0;
  double origin = -1, step = 0;
  CHECK(fcas_distribution_info(uu, &origin, &step, &n) == FCAS_OK);
  CHECK(n == 3);
  CHECK(origin == 0.0);
  CHECK(step == 100.0);
  std::vector<double> out(n);
  CHECK(fcas_distribution_masses(uu, out.data(), out.size()) == FCAS_OK);
  CHECK(out[0] == doctest::Approx(0.81));
  CHECK(out[1] == doctest::Approx(0.18));
  CHECK(out[2] == doctest::Approx(0.01));
  double mean = 0, var = 0;
  CHECK(fcas_distribution_moments(uu, &mean, &var) == FCAS_OK);
  CHECK(mean == doctest::Approx(20.0));
  double q = 0;
  CHECK(fcas_quantile(uu, 0.95, &q) == FCAS_OK);
  CHECK(q == 100.0);
  CHECK(fcas_quantile(uu, 1.5, &q) == FCAS_ERR_PARAMETER);

  fcas_distribution* fine = nullptr;
  CHECK(fcas_regrid(u, 0.5, &fine) == FCAS_OK);
  fcas_distribution* mixed = nullptr;
  CHECK(fcas_convolve(u, fine, &mixed) == FCAS_ERR_GRID_INCOMPATIBILITY);
  CHECK(mixed == nullptr);

  const double bad[] = {0.5, 0.6};
  fcas_distribution* b = nullptr;
  CHECK(fcas_distribution_create(0.0, 1.0, bad, 2, &b) == FCAS_ERR_PARAMETER);
  CHECK(fcas_convolve(nullptr, u, &mixed) == FCAS_ERR_INVALID_ARGUMENT);

  fcas_distribution_free(u);
  fcas_distribution_free(uu);
  fcas_distribution_free(fine);
  fcas_distribution_free(nullptr);
}

TEST_CASE("kde, bandwidth, requirements, outages, reductions") {
  const double samples[] = {-1.0, 0.0, 1.0};
  double h = 0;
  CHECK(fcas_silverman_bandwidth(samples, 3, &h) == FCAS_OK);
  CHECK(h == doctest::Approx(std::pow(4.0 / 9.0, 0.2)).epsilon(1e-14));
  CHECK(fcas_silverman_bandwidth(samples, 1, &h) == FCAS_ERR_INSUFFICIENT_DATA);

  fcas_distribution* k = nullptr;
  REQUIRE(fcas_kde_estimate(samples, 3, 0.05, 0.0, &k) == FCAS_OK);
  double up = 0, down = 0;
  CHECK(fcas_extract_requirements(k, 0.99, &up, &down) == FCAS_OK);
  CHECK(std::abs(up - down) <= 0.05 + 1e-9);
  CHECK(up > 1.0);
  fcas_distribution_free(k);

  const fcas_unit units[] = {{100.0, 0.1}, {100.0, 0.1}};
  fcas_distribution* o = nullptr;
  REQUIRE(fcas_outage_total(units, 2, 100.0, 0, &o) == FCAS_OK);
  double mean = 0;
  fcas_distribution_moments(o, &mean, nullptr);
  CHECK(mean == doctest::Approx(20.0));
  fcas_distribution_free(o);
  const fcas_unit broken[] = {{100.0, 1.5}};
  CHECK(fcas_outage_total(broken, 1, 0.5, 0, &o) != FCAS_OK);

  double r = 0;
  CHECK(fcas_reduction_pct(356.0, 49.1, &r) == FCAS_OK);
  CHECK(r == doctest::Approx(-86.2).epsilon(0.001));
}

TEST_CASE("config and commands") {
  const fs::path dir = fs::temp_directory_path() / "fcas_c_api";
  fs::remove_all(dir);
  char* path = nullptr;
  REQUIRE(fcas_generate_fixture(dir.string().c_str(), 5, 14, 0, &path) == FCAS_OK);
  fcas_config* cfg = nullptr;
  REQUIRE(fcas_config_load(path, &cfg) == FCAS_OK);
  fcas_string_free(path);

  CHECK(fcas_config_set_margin(cfg, 1.5) == FCAS_OK);
  CHECK(fcas_config_validate(cfg) == FCAS_ERR_CONFIGURATION);
  CHECK(fcas_config_set_margin(cfg, 0.95) == FCAS_OK);
  CHECK(fcas_config_set_mode(cfg, "bogus") == FCAS_ERR_CONFIGURATION);
  CHECK(fcas_config_set_mode(cfg, "baseline2pct") == FCAS_OK);
  CHECK(fcas_config_set_output_dir(cfg, (dir / "c_out").string().c_str()) == FCAS_OK);
  CHECK(fcas_config_validate(cfg) == FCAS_OK);

  char* summary = nullptr;
  CHECK(fcas_run_size(cfg, &summary) == FCAS_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("baseline2pct") != std::string::npos);
  fcas_string_free(summary);
  CHECK(fs::exists(dir / "c_out" / "requirements_baseline2pct.csv"));

  const int intervals[] = {60, 30};
  CHECK(fcas_config_set_sweep_intervals(cfg, intervals, 2) == FCAS_OK);
  CHECK(fcas_run_sweep(cfg, &summary) == FCAS_OK);
  fcas_string_free(summary);

  summary = nullptr;
  CHECK(fcas_run_backtest(cfg, &summary) == FCAS_ERR_IO);
  CHECK(summary == nullptr);

  CHECK(fcas_config_set_interval(cfg, 7) == FCAS_OK);
  CHECK(fcas_run_errors(cfg, &summary) == FCAS_ERR_CONFIGURATION);
  fcas_config_free(cfg);

  CHECK(fcas_config_parse("{oops", ".", &cfg) == FCAS_ERR_CONFIGURATION);
  CHECK(fcas_config_load("/nonexistent.json", &cfg) == FCAS_ERR_IO);
  CHECK(fcas_run_size(nullptr, &summary) == FCAS_ERR_INVALID_ARGUMENT);
  fs::remove_all(dir);
}
