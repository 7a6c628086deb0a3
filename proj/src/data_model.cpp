#include "fcas/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "fcas/error.hpp"
#include "text_util.hpp"

namespace fcas {

namespace chr = std::chrono;

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io: return "io";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Ordering: return "ordering";
    case ErrorCode::DataQuality: return "data-quality";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::GridIncompatibility: return "grid-incompatibility";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::EmptyInput: return "empty-input";
    case ErrorCode::DataInconsistency: return "data-inconsistency";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Timestamp

Timestamp Timestamp::from_civil(int year, unsigned month, unsigned day,
                                unsigned hour, unsigned minute) {
  const chr::sys_days d{chr::year{year} / chr::month{month} / chr::day{day}};
  return Timestamp(static_cast<std::int64_t>(d.time_since_epoch().count()) * 1440 +
                   hour * 60 + minute);
}

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
  text = detail::trim(text);
  // YYYY-MM-DDTHH:MM, optionally followed by ":00" seconds.
  if (text.size() != 16 && !(text.size() == 19 && text.substr(16) == ":00")) {
    return std::nullopt;
  }
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':') {
    return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (ec != std::errc{} || ptr != first + len) return std::nullopt;
    return v;
  };
  auto y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2);
  if (!y || !mo || !d || !h || !mi) return std::nullopt;
  const chr::year_month_day ymd{chr::year{*y}, chr::month{static_cast<unsigned>(*mo)},
                                chr::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59) return std::nullopt;
  return from_civil(*y, static_cast<unsigned>(*mo), static_cast<unsigned>(*d),
                    static_cast<unsigned>(*h), static_cast<unsigned>(*mi));
}

std::int64_t Timestamp::day_index() const {
  return minutes_ >= 0 ? minutes_ / 1440 : -((-minutes_ + 1439) / 1440);
}

int Timestamp::minute_of_day() const {
  return static_cast<int>(minutes_ - day_index() * 1440);
}

int Timestamp::day_of_week() const {
  const chr::sys_days d{chr::days{day_index()}};
  return static_cast<int>(chr::weekday{d}.iso_encoding()) - 1;
}

std::string Timestamp::date_string() const {
  const chr::year_month_day ymd{chr::sys_days{chr::days{day_index()}}};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

std::string Timestamp::to_string() const {
  const int mod = minute_of_day();
  return fmt::format("{}T{:02d}:{:02d}", date_string(), mod / 60, mod % 60);
}

// ------------------------------------------------------------ enums, keys

const char* driver_name(Driver d) {
  switch (d) {
    case Driver::Load: return "load";
    case Driver::Wind: return "wind";
    case Driver::Solar: return "solar";
  }
  return "?";
}

std::optional<Driver> parse_driver(std::string_view s) {
  if (s == "load") return Driver::Load;
  if (s == "wind") return Driver::Wind;
  if (s == "solar") return Driver::Solar;
  return std::nullopt;
}

const char* signal_kind_name(SignalKind k) {
  return k == SignalKind::Forecast ? "forecast" : "actual";
}

ClusterKey::ClusterKey(int hour_of_week) : value_(hour_of_week) {
  if (hour_of_week < 1 || hour_of_week > kCount) {
    throw Error(ErrorCode::Parameter,
                fmt::format("cluster key {} outside [1, {}]", hour_of_week, kCount));
  }
}

ClusterKey ClusterKey::from_parts(int day_of_week, int hour_of_day) {
  if (day_of_week < 0 || day_of_week > 6 || hour_of_day < 0 || hour_of_day > 23) {
    throw Error(ErrorCode::Parameter, "day-of-week or hour-of-day out of range");
  }
  return ClusterKey(day_of_week * 24 + hour_of_day + 1);
}

ClusterKey ClusterKey::of(Timestamp t) {
  return from_parts(t.day_of_week(), t.minute_of_day() / 60);
}

// -------------------------------------------------------------- SeriesFrame

SeriesFrame::SeriesFrame(SignalDescriptor signal, std::vector<SeriesPoint> points)
    : signal_(std::move(signal)), points_(std::move(points)) {
  const int res = signal_.resolution_minutes;
  if (res <= 0 || 1440 % res != 0) {
    throw Error(ErrorCode::Parameter,
                fmt::format("resolution {} min does not divide a day", res));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.value_mw)) {
      throw Error(ErrorCode::Validation,
                  fmt::format("non-finite value at {}", p.time.to_string()));
    }
    if (signal_.kind == SignalKind::Actual && p.value_mw < 0.0) {
      throw Error(ErrorCode::Validation,
                  fmt::format("negative actual value {} at {}", p.value_mw,
                              p.time.to_string()));
    }
    if (p.time.minute_of_day() % res != 0) {
      throw Error(ErrorCode::Validation,
                  fmt::format("timestamp {} not aligned to {}-minute resolution",
                              p.time.to_string(), res));
    }
    if (i > 0 && !(points_[i - 1].time < p.time)) {
      throw Error(ErrorCode::Ordering,
                  fmt::format("timestamp {} does not follow {}", p.time.to_string(),
                              points_[i - 1].time.to_string()));
    }
  }
}

std::optional<double> SeriesFrame::at(Timestamp t) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), t,
                             [](const SeriesPoint& p, Timestamp v) { return p.time < v; });
  if (it == points_.end() || it->time != t) return std::nullopt;
  return it->value_mw;
}

double SeriesFrame::max_value() const {
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.value_mw);
  return m;
}

// ---------------------------------------------------------------- ingestion

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, fmt::format("cannot open input file '{}'", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_missing_per_day(const std::vector<SeriesPoint>& points, int res,
                           const std::string& source) {
  if (points.empty()) return;
  const Timestamp first = points.front().time;
  const Timestamp last = points.back().time;
  std::map<std::int64_t, std::int64_t> present;
  for (const auto& p : points) ++present[p.time.day_index()];
  for (std::int64_t day = first.day_index(); day <= last.day_index(); ++day) {
    const std::int64_t lo = std::max(day * 1440, first.minutes());
    const std::int64_t hi = std::min(day * 1440 + 1439, last.minutes());
    // Slots on the resolution grid within [lo, hi].
    const std::int64_t first_slot = (lo + res - 1) / res;
    const std::int64_t last_slot = hi / res;
    const std::int64_t expected = last_slot - first_slot + 1;
    if (expected <= 0) continue;
    const auto it = present.find(day);
    const std::int64_t have = it == present.end() ? 0 : it->second;
    const double missing = static_cast<double>(expected - have) / static_cast<double>(expected);
    if (missing > kMaxMissingFractionPerDay) {
      throw Error(ErrorCode::DataQuality,
                  fmt::format("{}: day {} is missing {:.1f}% of rows ({} of {})", source,
                              Timestamp(day * 1440).date_string(), missing * 100.0,
                              expected - have, expected));
    }
  }
}

}  // namespace

SeriesFrame parse_series(std::string_view csv_text, const SignalDescriptor& schema,
                         const std::string& source_name) {
  detail::LineReader lines(csv_text);
  std::string_view line;
  if (!lines.next(line) || detail::trim(line) != "timestamp,value_mw") {
    throw Error(ErrorCode::Schema,
                fmt::format("{}: expected header 'timestamp,value_mw'", source_name));
  }
  std::vector<SeriesPoint> points;
  while (lines.next(line)) {
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, ',');
    const std::size_t row = lines.line_number();
    if (fields.size() != 2) {
      throw Error(ErrorCode::Schema,
                  fmt::format("{}: row {}: expected 2 fields, got {}", source_name, row,
                              fields.size()));
    }
    const auto t = Timestamp::parse(fields[0]);
    if (!t) {
      throw Error(ErrorCode::Schema, fmt::format("{}: row {}: unparseable timestamp '{}'",
                                                 source_name, row, fields[0]));
    }
    const auto v = detail::parse_double(fields[1]);
    if (!v || !std::isfinite(*v)) {
      throw Error(ErrorCode::Schema, fmt::format("{}: row {}: unparseable value '{}'",
                                                 source_name, row, fields[1]));
    }
    if (!points.empty() && !(points.back().time < *t)) {
      throw Error(ErrorCode::Ordering,
                  fmt::format("{}: row {}: timestamp {} is not after {}", source_name, row,
                              t->to_string(), points.back().time.to_string()));
    }
    points.push_back({*t, *v});
  }
  SeriesFrame frame(schema, std::move(points));
  check_missing_per_day(frame.points(), schema.resolution_minutes, source_name);
  return frame;
}

SeriesFrame ingest_series(const std::filesystem::path& path, const SignalDescriptor& schema) {
  return parse_series(read_file(path), schema, path.string());
}

std::vector<OutageRecord> parse_outages(std::string_view csv_text,
                                        const std::string& source_name) {
  detail::LineReader lines(csv_text);
  std::string_view line;
  if (!lines.next(line) || detail::trim(line) != "unit_id,rated_mw,start,end,cause") {
    throw Error(ErrorCode::Schema,
                fmt::format("{}: expected header 'unit_id,rated_mw,start,end,cause'",
                            source_name));
  }
  std::vector<OutageRecord> records;
  while (lines.next(line)) {
    if (detail::trim(line).empty()) continue;
    const std::size_t row = lines.line_number();
    const auto f = detail::split(line, ',');
    if (f.size() != 5) {
      throw Error(ErrorCode::Schema, fmt::format("{}: row {}: expected 5 fields, got {}",
                                                 source_name, row, f.size()));
    }
    OutageRecord r;
    r.unit_id = std::string(detail::trim(f[0]));
    const auto rated = detail::parse_double(f[1]);
    const auto start = Timestamp::parse(f[2]);
    const auto end = Timestamp::parse(f[3]);
    const auto cause = detail::trim(f[4]);
    if (r.unit_id.empty() || !rated || !start || !end ||
        (cause != "forced" && cause != "planned")) {
      throw Error(ErrorCode::Schema,
                  fmt::format("{}: row {}: malformed outage record", source_name, row));
    }
    if (!(*rated > 0.0) || !std::isfinite(*rated)) {
      throw Error(ErrorCode::Validation,
                  fmt::format("{}: row {}: rated capacity must be positive", source_name, row));
    }
    if (!(*start < *end)) {
      throw Error(ErrorCode::Validation,
                  fmt::format("{}: row {}: outage end {} is not after start {}", source_name,
                              row, end->to_string(), start->to_string()));
    }
    r.rated_capacity_mw = *rated;
    r.start = *start;
    r.end = *end;
    r.cause = cause == "forced" ? OutageCause::Forced : OutageCause::Planned;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<OutageRecord> ingest_outages(const std::filesystem::path& path) {
  return parse_outages(read_file(path), path.string());
}

std::string serialize_series(const SeriesFrame& series) {
  std::string out = "timestamp,value_mw\n";
  out.reserve(series.size() * 28 + out.size());
  for (const auto& p : series.points()) {
    out += p.time.to_string();
    out += ',';
    out += detail::format_shortest(p.value_mw);
    out += '\n';
  }
  return out;
}

void write_series(const SeriesFrame& series, const std::filesystem::path& path) {
  detail::write_text_file(path, serialize_series(series));
}

std::string serialize_outages(const std::vector<OutageRecord>& records) {
  std::string out = "unit_id,rated_mw,start,end,cause\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{}\n", r.unit_id,
                       detail::format_shortest(r.rated_capacity_mw), r.start.to_string(),
                       r.end.to_string(), r.forced() ? "forced" : "planned");
  }
  return out;
}

// --------------------------------------------------------------- resampling

SeriesFrame resample_to_interval(const SeriesFrame& series, int interval_minutes) {
  if (interval_minutes <= 0 || 60 % interval_minutes != 0) {
    throw Error(ErrorCode::Parameter,
                fmt::format("interval {} min is not a divisor of 60", interval_minutes));
  }
  const int res = series.resolution_minutes();
  if (res > interval_minutes || interval_minutes % res != 0) {
    throw Error(ErrorCode::Parameter,
                fmt::format("cannot resample {}-minute series to {}-minute intervals", res,
                            interval_minutes));
  }
  const int per_interval = interval_minutes / res;
  std::vector<SeriesPoint> out;
  const auto& pts = series.points();
  std::size_t i = 0;
  while (i < pts.size()) {
    const std::int64_t m = pts[i].time.minutes();
    const std::int64_t start = m - (((m % interval_minutes) + interval_minutes) % interval_minutes);
    const Timestamp interval_start(start);
    const Timestamp interval_end = interval_start + interval_minutes;
    std::size_t j = i;
    double sum = 0.0;
    while (j < pts.size() && pts[j].time < interval_end) {
      sum += pts[j].value_mw;
      ++j;
    }
    if (static_cast<int>(j - i) == per_interval) {
      out.push_back({interval_start, sum / per_interval});
    }
    i = j;
  }
  SignalDescriptor sig = series.signal();
  sig.resolution_minutes = interval_minutes;
  return SeriesFrame(std::move(sig), std::move(out));
}

SeriesFrame aggregate_series(const std::vector<SeriesFrame>& plants) {
  if (plants.empty()) {
    throw Error(ErrorCode::Parameter, "no plant series to aggregate");
  }
  const auto& head = plants.front();
  for (const auto& p : plants) {
    if (p.resolution_minutes() != head.resolution_minutes() || p.kind() != head.kind() ||
        p.driver() != head.driver()) {
      throw Error(ErrorCode::Parameter, "plant series differ in driver, kind or resolution");
    }
  }
  std::vector<SeriesPoint> out;
  for (const auto& pt : head.points()) {
    double sum = pt.value_mw;
    bool complete = true;
    for (std::size_t k = 1; k < plants.size() && complete; ++k) {
      const auto v = plants[k].at(pt.time);
      if (!v) complete = false;
      else sum += *v;
    }
    if (complete) out.push_back({pt.time, sum});
  }
  SignalDescriptor sig = head.signal();
  sig.unit.clear();
  return SeriesFrame(std::move(sig), std::move(out));
}

}  // namespace fcas
