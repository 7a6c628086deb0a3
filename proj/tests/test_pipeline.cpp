#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fcas/error.hpp"
#include "fcas/pipeline.hpp"

using namespace fcas;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

struct Workspace {
  fs::path dir;
  RunConfig config;

  explicit Workspace(const std::string& name, int holdout_days = 7) {
    dir = fs::temp_directory_path() / ("fcas_pipeline_" + name);
    fs::remove_all(dir);
    FixtureOptions o;
    o.days = 21;
    config = load_run_config(write_fixture(dir, o, holdout_days).config);
  }
  ~Workspace() { fs::remove_all(dir); }
};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an fcas::Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_run_config(
      R"({"inputs": {"load_forecast": "a.csv", "load_actual": "/abs/b.csv",
                     "wind_forecast": ["w1.csv", "w2.csv"], "wind_actual": ["x1.csv", "x2.csv"]},
          "margin": 0.95, "interval_minutes": 15, "mode": "static",
          "scenario": {"growth_ratio": {"wind": 2.0}, "sweep_intervals": [60, 15]}})",
      "/base");
  CHECK(c.inputs.load_forecast == fs::path("/base/a.csv"));
  CHECK(c.inputs.load_actual == fs::path("/abs/b.csv"));
  CHECK(c.inputs.wind_forecast.size() == 2);
  CHECK(c.inputs.solar_forecast.empty());
  CHECK(c.margin == 0.95);
  CHECK(c.scenario.margin == 0.95);
  CHECK(c.interval_minutes == 15);
  CHECK(c.mode == SizingMode::Static);
  CHECK(c.scenario.drivers.at(Driver::Wind).growth_ratio == 2.0);
  CHECK(c.scenario.drivers.at(Driver::Load).growth_ratio == 1.0);
  CHECK(c.scenario.intervals == std::vector<int>{60, 15});
  CHECK_NOTHROW(c.validate());

  CHECK(code_of([] { parse_run_config("{not json", "."); }) == ErrorCode::Configuration);
  CHECK(code_of([] { parse_run_config("{}", "."); }) == ErrorCode::Configuration);
  CHECK(code_of([] {
          parse_run_config(R"({"inputs": {"load_forecast": "a", "load_actual": "b"}, "mode": "x"})", ".");
        }) == ErrorCode::Configuration);
  CHECK(code_of([] {
          parse_run_config(R"({"inputs": {"load_forecast": "a", "load_actual": "b",
                                          "wind_forecast": "w"}})", ".");
        }) == ErrorCode::Configuration);
  CHECK(code_of([] { load_run_config("/nonexistent/config.json"); }) == ErrorCode::Io);

  RunConfig bad = c;
  bad.margin = 1.5;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::Configuration);
  bad = c;
  bad.interval_minutes = 10;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::Configuration);
  bad = c;
  bad.scenario.intervals = {60, 7};
  try {
    bad.validate();
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("not a divisor of 60") != std::string::npos);
  }
}

TEST_CASE("errors command writes six error files") {
  Workspace ws("errors", 0);
  const auto r = cmd_errors(ws.config);
  for (const char* d : {"load", "wind", "solar"}) {
    for (const char* k : {"forecast", "noise"}) {
      const auto p = ws.config.output_dir / (std::string("errors_") + d + "_" + k + ".csv");
      CHECK(fs::exists(p));
    }
  }
  CHECK(line_count(slurp(ws.config.output_dir / "errors_load_forecast.csv")) == 21 * 24 + 1);
  CHECK(fs::exists(ws.config.output_dir / "errors_report.txt"));
  CHECK(r.files.size() == 7);
}

TEST_CASE("input failures") {
  Workspace ws("failures", 0);
  RunConfig missing = ws.config;
  missing.inputs.load_actual = ws.dir / "nope.csv";
  try {
    cmd_errors(missing);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(std::string(e.what()).find("nope.csv") != std::string::npos);
  }

  // A forecast file that does not overlap the actuals.
  const auto shifted = ws.dir / "shifted.csv";
  std::ofstream(shifted) << "timestamp,value_mw\n2030-01-01T00:00,1000\n2030-01-01T01:00,1000\n";
  RunConfig apart = ws.config;
  apart.inputs.load_forecast = shifted;
  try {
    cmd_errors(apart);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
    CHECK(std::string(e.what()).find("no overlapping span") != std::string::npos);
  }
}

TEST_CASE("size command") {
  Workspace ws("size", 0);
  SUBCASE("dynamic: 168 rows per class plus comparison and dumps") {
    RunConfig c = ws.config;
    c.svg = true;
    c.dump_clusters = {1, 100};
    cmd_size(c);
    for (const char* cls : {"total", "secondary", "tertiary"}) {
      const auto csv = slurp(c.output_dir / (std::string("requirements_") + cls + ".csv"));
      CHECK(line_count(csv) == 169);
    }
    CHECK(line_count(slurp(c.output_dir / "comparison.csv")) == 169);
    CHECK(slurp(c.output_dir / "comparison.svg").rfind("<svg", 0) == 0);
    CHECK(fs::exists(c.output_dir / "distributions" / "cluster_100_total_reserve.csv"));
    CHECK(fs::exists(c.output_dir / "distributions" / "cluster_001_outage_total.csv"));
    CHECK(fs::exists(c.output_dir / "outage_stats.csv"));
  }
  SUBCASE("baseline2pct") {
    RunConfig c = ws.config;
    c.mode = SizingMode::Baseline2Pct;
    cmd_size(c);
    std::istringstream csv(slurp(c.output_dir / "requirements_baseline2pct.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "cluster_key,forecast_demand_mw,up_mw,down_mw");
    int rows = 0;
    while (std::getline(csv, line)) {
      ++rows;
      double key, demand, up, down;
      char sep;
      std::istringstream row(line);
      row >> key >> sep >> demand >> sep >> up >> sep >> down;
      CHECK(up == doctest::Approx(0.02 * demand).epsilon(1e-3));
      CHECK(down == up);
    }
    CHECK(rows == 168);
  }
  SUBCASE("static") {
    RunConfig c = ws.config;
    c.mode = SizingMode::Static;
    cmd_size(c);
    CHECK(line_count(slurp(c.output_dir / "requirements_static.csv")) == 4);
  }
  SUBCASE("margin out of range") {
    RunConfig c = ws.config;
    c.margin = 1.5;
    CHECK(code_of([&] { cmd_size(c); }) == ErrorCode::Configuration);
  }
  SUBCASE("byte-identical reruns") {
    RunConfig a = ws.config, b = ws.config;
    a.output_dir = ws.dir / "run_a";
    b.output_dir = ws.dir / "run_b";
    const auto ra = cmd_size(a);
    const auto rb = cmd_size(b);
    REQUIRE(ra.files.size() == rb.files.size());
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
      CHECK(ra.files[i].filename() == rb.files[i].filename());
      CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
    }
  }
}

TEST_CASE("sweep command") {
  Workspace ws("sweep", 0);
  RunConfig c = ws.config;
  c.scenario.intervals = {60, 5};
  cmd_sweep(c);
  const auto csv = slurp(c.output_dir / "sweep.csv");
  CHECK(line_count(csv) == 3);
  CHECK(csv.find("60,") != std::string::npos);
  CHECK(csv.find("\n5,") != std::string::npos);

  c.scenario.intervals = {60};
  cmd_sweep(c);
  CHECK(slurp(c.output_dir / "sweep.csv").find(",0.0,") != std::string::npos);

  c.scenario.intervals = {7};
  CHECK(code_of([&] { cmd_sweep(c); }) == ErrorCode::Configuration);
}

TEST_CASE("backtest command") {
  SUBCASE("with holdout") {
    Workspace ws("backtest", 7);
    const auto r = cmd_backtest(ws.config);
    const auto csv = slurp(ws.config.output_dir / "coverage.csv");
    CHECK(line_count(csv) == 3);
    CHECK(csv.find("total,") != std::string::npos);
    CHECK(csv.find("secondary,") != std::string::npos);
    CHECK(r.summary.find("coverage=") != std::string::npos);

    RunConfig base = ws.config;
    base.mode = SizingMode::Baseline2Pct;
    CHECK_NOTHROW(cmd_backtest(base));
    RunConfig st = ws.config;
    st.mode = SizingMode::Static;
    CHECK_NOTHROW(cmd_backtest(st));
  }
  SUBCASE("without holdout") {
    Workspace ws("backtest_none", 0);
    CHECK(code_of([&] { cmd_backtest(ws.config); }) == ErrorCode::Io);
  }
}
