#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fcas {

// Minute-precision local grid time, stored as minutes since 1970-01-01T00:00.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::int64_t minutes) : minutes_(minutes) {}

  static Timestamp from_civil(int year, unsigned month, unsigned day,
                              unsigned hour = 0, unsigned minute = 0);

  // Accepts "YYYY-MM-DDTHH:MM" (a space separator is tolerated).
  static std::optional<Timestamp> parse(std::string_view text);
  std::string to_string() const;

  constexpr std::int64_t minutes() const { return minutes_; }
  std::int64_t day_index() const;     // days since epoch
  int minute_of_day() const;          // 0..1439
  int day_of_week() const;            // Monday = 0 .. Sunday = 6
  std::string date_string() const;    // "YYYY-MM-DD"

  constexpr Timestamp operator+(std::int64_t m) const { return Timestamp(minutes_ + m); }
  constexpr Timestamp operator-(std::int64_t m) const { return Timestamp(minutes_ - m); }
  constexpr std::int64_t operator-(Timestamp o) const { return minutes_ - o.minutes_; }
  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  std::int64_t minutes_ = 0;
};

enum class Driver { Load, Wind, Solar };
enum class SignalKind { Forecast, Actual };

const char* driver_name(Driver d);
std::optional<Driver> parse_driver(std::string_view s);
const char* signal_kind_name(SignalKind k);

// Hour-of-week cluster, 1..168: day_of_week * 24 + hour_of_day + 1.
class ClusterKey {
 public:
  static constexpr int kCount = 168;

  explicit ClusterKey(int hour_of_week);
  static ClusterKey from_parts(int day_of_week, int hour_of_day);
  static ClusterKey of(Timestamp t);

  int value() const { return value_; }
  int day_of_week() const { return (value_ - 1) / 24; }
  int hour_of_day() const { return (value_ - 1) % 24; }
  std::size_t index() const { return static_cast<std::size_t>(value_ - 1); }

  auto operator<=>(const ClusterKey&) const = default;

 private:
  int value_;
};

struct SignalDescriptor {
  Driver driver = Driver::Load;
  std::string unit;  // plant identifier for VRE series; empty for grid totals
  SignalKind kind = SignalKind::Actual;
  int resolution_minutes = 60;
};

struct SeriesPoint {
  Timestamp time;
  double value_mw = 0.0;
};

// An immutable, validated time series. Gaps are allowed (absent points); the
// constructor enforces ordering, alignment and value invariants.
class SeriesFrame {
 public:
  SeriesFrame(SignalDescriptor signal, std::vector<SeriesPoint> points);

  const SignalDescriptor& signal() const { return signal_; }
  Driver driver() const { return signal_.driver; }
  SignalKind kind() const { return signal_.kind; }
  int resolution_minutes() const { return signal_.resolution_minutes; }
  const std::vector<SeriesPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  // Value at exactly `t`, if present.
  std::optional<double> at(Timestamp t) const;
  double max_value() const;

 private:
  SignalDescriptor signal_;
  std::vector<SeriesPoint> points_;
};

enum class OutageCause { Forced, Planned };

struct OutageRecord {
  std::string unit_id;
  double rated_capacity_mw = 0.0;
  Timestamp start;
  Timestamp end;
  OutageCause cause = OutageCause::Forced;

  double duration_hours() const { return static_cast<double>(end - start) / 60.0; }
  bool forced() const { return cause == OutageCause::Forced; }
};

// Maximum fraction of grid slots that may be missing within any calendar day.
inline constexpr double kMaxMissingFractionPerDay = 0.05;

SeriesFrame ingest_series(const std::filesystem::path& path,
                          const SignalDescriptor& schema);
SeriesFrame parse_series(std::string_view csv_text, const SignalDescriptor& schema,
                         const std::string& source_name = "<memory>");

std::vector<OutageRecord> ingest_outages(const std::filesystem::path& path);
std::vector<OutageRecord> parse_outages(std::string_view csv_text,
                                        const std::string& source_name = "<memory>");

// Shortest round-trip formatting: ingest(serialize(x)) == x bit for bit.
std::string serialize_series(const SeriesFrame& series);
void write_series(const SeriesFrame& series, const std::filesystem::path& path);
std::string serialize_outages(const std::vector<OutageRecord>& records);

// Per-interval arithmetic means; an interval with any missing constituent
// point is absent from the result.
SeriesFrame resample_to_interval(const SeriesFrame& series, int interval_minutes);

// Sums plant-level series into a grid-level total at timestamps present in
// every input.
SeriesFrame aggregate_series(const std::vector<SeriesFrame>& plants);

}  // namespace fcas
