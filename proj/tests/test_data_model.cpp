#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <string>

#include <fmt/format.h>

#include "fcas/data_model.hpp"
#include "fcas/error.hpp"

using namespace fcas;

namespace {

const SignalDescriptor kHourlyForecast{Driver::Load, "", SignalKind::Forecast, 60};
const SignalDescriptor kMinuteActual{Driver::Load, "", SignalKind::Actual, 1};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an fcas::Error");
  return ErrorCode::Io;
}

std::string minute_csv(Timestamp start, int count, double (*value)(int)) {
  std::string csv = "timestamp,value_mw\n";
  for (int i = 0; i < count; ++i) {
    csv += fmt::format("{},{}\n", (start + i).to_string(), value(i));
  }
  return csv;
}

}  // namespace

TEST_CASE("timestamps parse, print and know their weekday") {
  const auto t = Timestamp::parse("2018-01-01T00:00");
  REQUIRE(t);
  CHECK(t->day_of_week() == 0);  // 2018-01-01 was a Monday
  CHECK(t->to_string() == "2018-01-01T00:00");
  CHECK(Timestamp::parse("2018-03-04 13:45")->to_string() == "2018-03-04T13:45");
  CHECK(Timestamp::parse("2018-03-04T13:45:00")->minute_of_day() == 13 * 60 + 45);
  CHECK_FALSE(Timestamp::parse("2018-13-01T00:00"));
  CHECK_FALSE(Timestamp::parse("yesterday"));
  CHECK(Timestamp::from_civil(2020, 2, 29).date_string() == "2020-02-29");
  CHECK(Timestamp::from_civil(1969, 12, 31, 23, 59).minutes() == -1);
  CHECK(Timestamp::from_civil(1969, 12, 31, 23, 59).minute_of_day() == 1439);
  CHECK(Timestamp::from_civil(1969, 12, 31).day_of_week() == 2);
}

TEST_CASE("cluster keys are a bijection with (weekday, hour)") {
  std::set<int> seen;
  for (int dow = 0; dow < 7; ++dow) {
    for (int hour = 0; hour < 24; ++hour) {
      const ClusterKey k = ClusterKey::from_parts(dow, hour);
      CHECK(k.day_of_week() == dow);
      CHECK(k.hour_of_day() == hour);
      seen.insert(k.value());
    }
  }
  CHECK(seen.size() == 168);
  CHECK(*seen.begin() == 1);
  CHECK(*seen.rbegin() == 168);

  const Timestamp monday = Timestamp::from_civil(2018, 1, 1);
  CHECK(ClusterKey::of(monday).value() == 1);
  CHECK(ClusterKey::of(monday + 59).value() == 1);
  CHECK(ClusterKey::of(monday + 60).value() == 2);
  CHECK(ClusterKey::of(monday + 7 * 1440 - 1).value() == 168);
  CHECK(ClusterKey::of(monday + 7 * 1440).value() == 1);
  CHECK(code_of([] { ClusterKey(0); }) == ErrorCode::Parameter);
  CHECK(code_of([] { ClusterKey(169); }) == ErrorCode::Parameter);
}

TEST_CASE("ingest_series reads the documented CSV schema") {
  const auto s = parse_series(
      "timestamp,value_mw\n2018-01-01T00:00,1200.5\n2018-01-01T01:00,1190.0\n", kHourlyForecast);
  REQUIRE(s.size() == 2);
  CHECK(s.resolution_minutes() == 60);
  CHECK(s.points()[0].value_mw == 1200.5);
  CHECK(s.at(Timestamp::from_civil(2018, 1, 1, 1)) == 1190.0);
  CHECK_FALSE(s.at(Timestamp::from_civil(2018, 1, 1, 2)));

  SUBCASE("a full day of minute actuals") {
    const auto day = parse_series(
        minute_csv(Timestamp::from_civil(2018, 1, 1), 1440, [](int i) { return 100.0 + i; }),
        kMinuteActual);
    CHECK(day.size() == 1440);
    CHECK(day.resolution_minutes() == 1);
  }
  SUBCASE("out-of-order rows") {
    CHECK(code_of([] {
            parse_series("timestamp,value_mw\n2018-01-01T01:00,1\n2018-01-01T00:00,2\n",
                         kHourlyForecast);
          }) == ErrorCode::Ordering);
  }
  SUBCASE("duplicate timestamps") {
    CHECK(code_of([] {
            parse_series("timestamp,value_mw\n2018-01-01T00:00,1\n2018-01-01T00:00,2\n",
                         kHourlyForecast);
          }) == ErrorCode::Ordering);
  }
  SUBCASE("bad header, bad value, bad timestamp") {
    CHECK(code_of([] { parse_series("time,value\n", kHourlyForecast); }) == ErrorCode::Schema);
    CHECK(code_of([] {
            parse_series("timestamp,value_mw\n2018-01-01T00:00,abc\n", kHourlyForecast);
          }) == ErrorCode::Schema);
    CHECK(code_of([] { parse_series("timestamp,value_mw\nnoon,5\n", kHourlyForecast); }) ==
          ErrorCode::Schema);
  }
  SUBCASE("minute component not aligned to the resolution") {
    CHECK(code_of([] {
            parse_series("timestamp,value_mw\n2018-01-01T00:30,1\n", kHourlyForecast);
          }) == ErrorCode::Validation);
  }
  SUBCASE("negative actual and non-finite values") {
    CHECK(code_of([] {
            parse_series("timestamp,value_mw\n2018-01-01T00:00,-1\n", kMinuteActual);
          }) == ErrorCode::Validation);
    CHECK(code_of([] {
            parse_series("timestamp,value_mw\n2018-01-01T00:00,nan\n", kHourlyForecast);
          }) != ErrorCode::Io);
    // Forecast signals may be negative (e.g. net quantities).
    CHECK_NOTHROW(parse_series("timestamp,value_mw\n2018-01-01T00:00,-1\n", kHourlyForecast));
  }
  SUBCASE("too many missing minutes in a day") {
    std::string csv = "timestamp,value_mw\n";
    const Timestamp start = Timestamp::from_civil(2018, 1, 1);
    for (int i = 0; i < 1440; ++i) {
      if (i >= 100 && i < 200) continue;  // 100 of 1440 missing, above 5%
      csv += fmt::format("{},50\n", (start + i).to_string());
    }
    CHECK(code_of([&] { parse_series(csv, kMinuteActual); }) == ErrorCode::DataQuality);
  }
  SUBCASE("missing file") {
    CHECK(code_of([] { ingest_series("/nonexistent/x.csv", kMinuteActual); }) == ErrorCode::Io);
  }
}

TEST_CASE("series round-trip through CSV bit for bit") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5000.0);
  std::vector<SeriesPoint> pts;
  const Timestamp start = Timestamp::from_civil(2018, 5, 1);
  for (int i = 0; i < 500; ++i) pts.push_back({start + i, u(rng)});
  const SeriesFrame s(kMinuteActual, pts);

  const auto dir = std::filesystem::temp_directory_path() / "fcas_test_roundtrip";
  write_series(s, dir / "s.csv");
  const SeriesFrame back = ingest_series(dir / "s.csv", kMinuteActual);
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.points()[i].time == s.points()[i].time);
    CHECK(back.points()[i].value_mw == s.points()[i].value_mw);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("ingest_outages") {
  const auto recs =
      parse_outages("unit_id,rated_mw,start,end,cause\nG1,100,2018-03-01T00:00,2018-03-02T00:00,forced\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].unit_id == "G1");
  CHECK(recs[0].rated_capacity_mw == 100.0);
  CHECK(recs[0].duration_hours() == 24.0);
  CHECK(recs[0].forced());

  CHECK(parse_outages("unit_id,rated_mw,start,end,cause\n").empty());
  CHECK(code_of([] {
          parse_outages(
              "unit_id,rated_mw,start,end,cause\nG1,100,2018-03-02T00:00,2018-03-01T00:00,forced\n");
        }) == ErrorCode::Validation);
  CHECK(code_of([] {
          parse_outages("unit_id,rated_mw,start,end,cause\nG1,100,2018-03-01T00:00,2018-03-02T00:00,meteor\n");
        }) != ErrorCode::Io);

  const auto planned = parse_outages(
      "unit_id,rated_mw,start,end,cause\nG2,50,2018-03-01T00:00,2018-03-01T06:00,planned\n");
  CHECK_FALSE(planned[0].forced());
  const auto again = parse_outages(serialize_outages(recs));
  CHECK(again[0].unit_id == "G1");
  CHECK(again[0].end == recs[0].end);
}

TEST_CASE("resample_to_interval") {
  const Timestamp start = Timestamp::from_civil(2018, 1, 1);
  auto minutes = [&](int n, auto value) {
    std::vector<SeriesPoint> pts;
    for (int i = 0; i < n; ++i) pts.push_back({start + i, value(i)});
    return SeriesFrame(kMinuteActual, pts);
  };

  SUBCASE("constant series stays constant") {
    const auto r = resample_to_interval(minutes(60, [](int) { return 50.0; }), 15);
    REQUIRE(r.size() == 4);
    CHECK(r.resolution_minutes() == 15);
    for (const auto& p : r.points()) CHECK(p.value_mw == 50.0);
    CHECK(r.points()[1].time == start + 15);
  }
  SUBCASE("mean of 0..59 is 29.5") {
    const auto r = resample_to_interval(minutes(60, [](int i) { return double(i); }), 60);
    REQUIRE(r.size() == 1);
    CHECK(r.points()[0].value_mw == doctest::Approx(29.5).epsilon(1e-15));
  }
  SUBCASE("interval with a missing minute is absent") {
    std::vector<SeriesPoint> pts;
    for (int i = 0; i < 120; ++i) {
      if (i != 70) pts.push_back({start + i, 1.0});
    }
    const auto r = resample_to_interval(SeriesFrame(kMinuteActual, pts), 60);
    REQUIRE(r.size() == 1);
    CHECK(r.points()[0].time == start);
  }
  SUBCASE("identity at native resolution and mean preservation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 900.0);
    std::vector<double> raw(240);
    for (auto& x : raw) x = u(rng);
    const auto s = minutes(240, [&](int i) { return raw[i]; });
    const auto same = resample_to_interval(s, 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(same.points()[i].value_mw == s.points()[i].value_mw);
    }
    for (int interval : {5, 15, 30, 60}) {
      const auto r = resample_to_interval(s, interval);
      double a = 0.0, b = 0.0;
      for (double x : raw) a += x;
      for (const auto& p : r.points()) b += p.value_mw;
      a /= raw.size();
      b /= r.size();
      CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
    }
  }
  SUBCASE("invalid intervals") {
    const auto s = minutes(60, [](int) { return 1.0; });
    CHECK(code_of([&] { resample_to_interval(s, 7); }) == ErrorCode::Parameter);
    CHECK(code_of([&] { resample_to_interval(s, 0); }) == ErrorCode::Parameter);
  }
}

TEST_CASE("aggregate_series sums plants on common timestamps") {
  const Timestamp start = Timestamp::from_civil(2018, 1, 1);
  const SignalDescriptor wind{Driver::Wind, "A", SignalKind::Actual, 1};
  SeriesFrame a(wind, {{start, 1.0}, {start + 1, 2.0}, {start + 2, 3.0}});
  SeriesFrame b(wind, {{start + 1, 10.0}, {start + 2, 20.0}});
  const auto total = aggregate_series({a, b});
  REQUIRE(total.size() == 2);
  CHECK(total.points()[0].value_mw == 12.0);
  CHECK(total.points()[1].value_mw == 23.0);
  CHECK(total.driver() == Driver::Wind);
}
