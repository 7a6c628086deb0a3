#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fcas/error.hpp"
#include "fcas/fixture.hpp"
#include "fcas/scenario.hpp"
#include "oracles.hpp"

using namespace fcas;

namespace {

const Timestamp kStart = Timestamp::from_civil(2018, 1, 1);

template <typename F>
SeriesFrame minute_actual(int minutes, F value) {
  std::vector<SeriesPoint> pts;
  for (int i = 0; i < minutes; ++i) pts.push_back({kStart + i, value(i)});
  return SeriesFrame({Driver::Load, "", SignalKind::Actual, 1}, pts);
}

std::vector<double> all_errors(const ErrorSampleSet& s) { return s.all_values(); }

}  // namespace

TEST_CASE("scale_samples") {
  ErrorSampleSet s{Driver::Wind, ErrorKind::Forecast, {}};
  s.samples[ClusterKey(1)].push_back({kStart, 10.0});
  s.samples[ClusterKey(2)].push_back({kStart + 60, -4.0});

  ScenarioSpec unit;
  CHECK(all_errors(scale_samples(s, unit)) == all_errors(s));

  ScenarioSpec grow;
  grow.drivers[Driver::Wind].growth_ratio = 2.0;
  const auto doubled = scale_samples(s, grow);
  CHECK(doubled.samples.at(ClusterKey(1))[0].error_mw == 20.0);
  CHECK(doubled.samples.at(ClusterKey(2))[0].error_mw == -8.0);

  ScenarioSpec better;
  better.drivers[Driver::Wind].forecast_factor = 0.5;
  better.drivers[Driver::Wind].growth_ratio = 3.0;
  CHECK(scale_samples(s, better).samples.at(ClusterKey(1))[0].error_mw == 15.0);

  ScenarioSpec missing;
  missing.drivers.erase(Driver::Wind);
  CHECK_THROWS_AS(scale_samples(s, missing), Error);
}

TEST_CASE("scaling commutes with clustering") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(500.0, 30.0);
  const auto actual = minute_actual(3 * 1440, [&](int) { return n(rng); });
  ScenarioSpec spec;
  spec.drivers[Driver::Load].growth_ratio = 1.7;
  const auto noise = compute_noise_errors(actual, 60);
  const auto scaled_then_clustered = scale_samples(noise, spec);
  // Cluster-first: scale each cluster's values independently.
  for (const auto& [key, v] : noise.samples) {
    const auto& w = scaled_then_clustered.samples.at(key);
    REQUIRE(w.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(w[i].error_mw == v[i].error_mw * 1.7);
  }
}

TEST_CASE("scaling samples by c scales a single-driver requirement by c") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 12.0);
  ErrorSampleSet base{Driver::Load, ErrorKind::Forecast, {}};
  for (int c = 1; c <= 168; ++c) {
    for (int w = 0; w < 30; ++w) base.samples[ClusterKey(c)].push_back({kStart + (c - 1) * 60 + w * 10080, n(rng)});
  }
  ScenarioSpec spec;
  spec.drivers[Driver::Load].growth_ratio = 2.5;
  DriverErrorSets one, scaled;
  one.forecast_of(Driver::Load) = base;
  scaled.forecast_of(Driver::Load) = scale_samples(base, spec);
  const auto zero = DiscreteDistribution::point_mass(0.0, 0.5);
  const auto policy = ReliabilityPolicy::symmetric(0.99);
  const auto a = size_dynamic(one, zero, policy);
  const auto b = size_dynamic(scaled, zero, policy);
  for (int c = 0; c < 168; ++c) {
    // One grid step of slack at each scale, magnified by the scaling factor.
    CHECK(std::abs(b.clusters[c].total.up_mw - 2.5 * a.clusters[c].total.up_mw) <= 0.5 * 3.5);
    CHECK(std::abs(b.clusters[c].total.down_mw - 2.5 * a.clusters[c].total.down_mw) <= 0.5 * 3.5);
  }
}

TEST_CASE("subhourly forecast synthesis") {
  SUBCASE("constant actual") {
    const auto a = minute_actual(240, [](int) { return 100.0; });
    for (int interval : {5, 15, 30, 60}) {
      const auto f = synthesize_subhourly_forecasts(a, interval);
      for (const auto& p : f.points()) CHECK(p.value_mw == 100.0);
      for (double e : compute_forecast_errors(f, a, interval).all_values()) CHECK(e == 0.0);
    }
  }
  SUBCASE("ramp of 1 MW per minute") {
    const auto a = minute_actual(240, [](int i) { return 100.0 + i; });
    auto errors = [&](int interval) {
      return compute_forecast_errors(synthesize_subhourly_forecasts(a, interval), a, interval)
          .all_values();
    };
    // Oracle: brute-force mean of the interval minus the last minute before it.
    for (int interval : {5, 60}) {
      for (int start = interval; start + interval <= 240; start += interval) {
        double sum = 0.0;
        for (int m = start; m < start + interval; ++m) sum += 100.0 + m;
        const double oracle = sum / interval - (100.0 + start - 1);
        CHECK(oracle == doctest::Approx(interval == 5 ? 3.0 : 30.5));
      }
    }
    const auto five = errors(5);
    CHECK(five.size() == 240 / 5 - 1);  // the first interval has no anchor
    for (double e : five) CHECK(e == doctest::Approx(3.0).epsilon(1e-12));
    const auto hour = errors(60);
    for (double e : hour) CHECK(std::abs(e) > 3.0);
  }
  SUBCASE("interval mean anchor has zero forecast error") {
    const auto a = minute_actual(120, [](int i) { return 50.0 + (i % 7); });
    const auto f = synthesize_subhourly_forecasts(a, 15, ForecastAnchor::IntervalMean);
    for (double e : compute_forecast_errors(f, a, 15).all_values()) CHECK(std::abs(e) < 1e-12);
  }
  SUBCASE("invalid intervals") {
    const auto a = minute_actual(60, [](int) { return 1.0; });
    CHECK_THROWS_AS(synthesize_subhourly_forecasts(a, 7), Error);
    CHECK_THROWS_AS(synthesize_subhourly_forecasts(a, 1), Error);
  }
}

TEST_CASE("reduction percent") {
  CHECK(reduction_percent(49.1, 356.0) == doctest::Approx(-86.2).epsilon(0.001));
  CHECK(reduction_percent(122.3, 205.1) == doctest::Approx(-40.4).epsilon(0.001));
  CHECK(reduction_percent(10.0, 10.0) == 0.0);
  CHECK(std::isnan(reduction_percent(1.0, 0.0)));
}

TEST_CASE("scenario validation") {
  ScenarioSpec s;
  CHECK_NOTHROW(s.validate());
  s.intervals = {60, 7};
  try {
    s.validate();
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Configuration);
    CHECK(std::string(e.what()).find("not a divisor of 60") != std::string::npos);
  }
  s = ScenarioSpec{};
  s.drivers[Driver::Solar].forecast_factor = 1.5;
  CHECK_THROWS_AS(s.validate(), Error);
  s = ScenarioSpec{};
  s.drivers[Driver::Load].growth_ratio = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = ScenarioSpec{};
  s.margin = 1.0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("resolution sweep") {
  FixtureOptions o;
  o.days = 14;
  o.with_wind = false;
  o.with_solar = false;
  o.units = 0;
  o.load_noise_half_life_min = 5.0;
  const Dataset d = generate_fixture(o);
  const SweepInputs inputs{d.load_actual, std::nullopt, std::nullopt,
                           DiscreteDistribution::point_mass(0.0, 0.5)};

  SUBCASE("single 60-minute interval has zero reduction") {
    ScenarioSpec spec;
    spec.intervals = {60};
    const auto r = run_resolution_sweep(inputs, spec);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].down_reduction_pct == 0.0);
    CHECK(r.rows[0].up_reduction_pct == 0.0);
  }
  SUBCASE("reductions are relative to an implicit 60-minute run") {
    ScenarioSpec spec;
    spec.intervals = {5};
    const auto r = run_resolution_sweep(inputs, spec);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].interval_minutes == 5);
    CHECK(r.rows[0].down_reduction_pct < 0.0);
  }
  SUBCASE("means do not increase as intervals shorten") {
    const auto r = run_resolution_sweep(inputs, ScenarioSpec{});
    REQUIRE(r.rows.size() == 4);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      CHECK(r.rows[i].interval_minutes < r.rows[i - 1].interval_minutes);
      CHECK(r.rows[i].mean_up_mw <= r.rows[i - 1].mean_up_mw);
      CHECK(r.rows[i].mean_down_mw <= r.rows[i - 1].mean_down_mw);
    }
    const std::string csv = r.to_csv();
    CHECK(csv.rfind("interval_min,mean_down_mw,down_reduction_pct,mean_up_mw,up_reduction_pct\n", 0) == 0);
  }
}
