#include "bessplan/profiles.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bessplan/error.hpp"
#include "text_util.hpp"

namespace bessplan {

namespace chr = std::chrono;

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Demand: return "demand";
    case ProfileKind::Solar: return "solar";
    case ProfileKind::Wind: return "wind";
    case ProfileKind::Price: return "price";
  }
  return "?";
}

ProfileKind parse_profile_kind(std::string_view name) {
  if (name == "demand") return ProfileKind::Demand;
  if (name == "solar") return ProfileKind::Solar;
  if (name == "wind") return ProfileKind::Wind;
  if (name == "price") return ProfileKind::Price;
  throw ConfigError("unknown profile kind '" + std::string(name) + "'");
}

namespace {

int parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, bool& ok) {
  int v = 0;
  if (pos + len > s.size()) {
    ok = false;
    return 0;
  }
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
  if (ec != std::errc() || ptr != s.data() + pos + len) ok = false;
  return v;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM
  bool ok = text.size() == 16 && text[4] == '-' && text[7] == '-' &&
            (text[10] == 'T' || text[10] == ' ') && text[13] == ':';
  const int y = parse_fixed_int(text, 0, 4, ok);
  const int mo = parse_fixed_int(text, 5, 2, ok);
  const int d = parse_fixed_int(text, 8, 2, ok);
  const int hh = parse_fixed_int(text, 11, 2, ok);
  const int mm = parse_fixed_int(text, 14, 2, ok);
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(mo)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ok || !ymd.ok() || hh < 0 || hh > 23 || mm < 0 || mm > 59)
    throw ParseError("bad timestamp '" + std::string(text) + "'");
  return to_timestamp(ymd, hh * 60 + mm);
}

Timestamp to_timestamp(chr::year_month_day date, int minute_of_day) {
  return static_cast<Timestamp>(chr::sys_days(date).time_since_epoch().count()) * kMinutesPerDay +
         minute_of_day;
}

chr::year_month_day date_of(Timestamp t) {
  auto days = t >= 0 ? t / kMinutesPerDay : -((-t + kMinutesPerDay - 1) / kMinutesPerDay);
  return chr::year_month_day{chr::sys_days{chr::days{days}}};
}

std::string format_timestamp(Timestamp t) {
  const auto ymd = date_of(t);
  const Timestamp mod = t - to_timestamp(ymd);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(mod / 60), static_cast<int>(mod % 60));
  return buf;
}

Profile Profile::day(Index d) const {
  const Index n = samples_per_day();
  if (d < 0 || (d + 1) * n > values.size())
    throw ValidationError("day index " + std::to_string(d) + " out of range");
  Profile out;
  out.values = values.segment(d * n, n);
  out.step_minutes = step_minutes;
  out.start = start + static_cast<Timestamp>(d) * kMinutesPerDay;
  out.kind = kind;
  return out;
}

chr::year_month_day Profile::date_of_day(Index d) const {
  return date_of(start + static_cast<Timestamp>(d) * kMinutesPerDay);
}

void Profile::validate() const {
  if (values.size() == 0) throw ValidationError("profile is empty");
  if (step_minutes <= 0 || kMinutesPerDay % step_minutes != 0)
    throw ValidationError("step of " + std::to_string(step_minutes) +
                          " min does not divide a day");
  if (!values.allFinite()) throw ValidationError("profile contains non-finite values");
  if (kind != ProfileKind::Price) {
    for (Index i = 0; i < values.size(); ++i)
      if (values[i] < 0)
        throw ValidationError(std::string(to_string(kind)) + " value " +
                              std::to_string(values[i]) + " at sample " + std::to_string(i) +
                              " is negative");
  }
}

Profile make_daily(Vector values, ProfileKind kind, int step_minutes) {
  Profile p;
  p.values = std::move(values);
  p.step_minutes = step_minutes;
  p.kind = kind;
  if (p.values.size() * step_minutes != kMinutesPerDay)
    throw ValidationError("daily profile needs " + std::to_string(kMinutesPerDay / step_minutes) +
                          " samples, got " + std::to_string(p.values.size()));
  p.validate();
  return p;
}

std::string_view to_string(DayType t) {
  switch (t) {
    case DayType::SWD: return "SWD";
    case DayType::SED: return "SED";
    case DayType::NSWD: return "NSWD";
    case DayType::NSED: return "NSED";
  }
  return "?";
}

DayType parse_day_type(std::string_view name) {
  for (DayType t : kAllDayTypes)
    if (to_string(t) == name) return t;
  throw ConfigError("unknown day type '" + std::string(name) + "'");
}

MonthDay parse_month_day(std::string_view text) {
  bool ok = text.size() == 5 && text[2] == '-';
  MonthDay md{static_cast<unsigned>(parse_fixed_int(text, 0, 2, ok)),
              static_cast<unsigned>(parse_fixed_int(text, 3, 2, ok))};
  // 2000 is a leap year, so Feb 29 is accepted as a boundary.
  if (!ok || !chr::year_month_day{chr::year{2000}, chr::month{md.month}, chr::day{md.day}}.ok())
    throw ConfigError("bad month-day '" + std::string(text) + "', expected MM-DD");
  return md;
}

void CalendarRule::validate() const {
  for (const MonthDay& md : {summer_start, summer_end})
    if (!chr::year_month_day{chr::year{2000}, chr::month{md.month}, chr::day{md.day}}.ok())
      throw ConfigError("invalid summer boundary");
  int n_weekend = 0;
  for (bool w : weekend) n_weekend += w;
  if (n_weekend == 0 || n_weekend == 7)
    throw ConfigError("weekend days must be a non-empty proper subset of the week");
}

bool CalendarRule::in_summer(chr::year_month_day date) const {
  const MonthDay md{static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day())};
  if (summer_start <= summer_end) return summer_start <= md && md <= summer_end;
  // Window wraps over the new year.
  return md >= summer_start || md <= summer_end;
}

DayType classify_day(chr::year_month_day date, const CalendarRule& rule) {
  const bool summer = rule.in_summer(date);
  const bool weekend = rule.weekend[chr::weekday{chr::sys_days{date}}.c_encoding()];
  if (summer) return weekend ? DayType::SED : DayType::SWD;
  return weekend ? DayType::NSED : DayType::NSWD;
}

DayTypeMap<int> day_counts(int year, const CalendarRule& rule) {
  DayTypeMap<int> counts{};
  const chr::sys_days first{chr::year{year} / chr::January / 1};
  const chr::sys_days last{chr::year{year} / chr::December / 31};
  for (chr::sys_days d = first; d <= last; d += chr::days{1})
    ++at(counts, classify_day(chr::year_month_day{d}, rule));
  return counts;
}

Profile read_timeseries(std::istream& in, const std::map<std::string, std::string>& column_map,
                        ProfileKind kind, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": empty file");
  const auto header = detail::split_csv_line(detail::trim(line));
  int ts_col = -1, val_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string role = header[c];
    if (!column_map.empty()) {
      auto it = column_map.find(header[c]);
      role = it == column_map.end() ? std::string() : it->second;
    }
    if (role == "timestamp") ts_col = static_cast<int>(c);
    if (role == "value") val_col = static_cast<int>(c);
  }
  if (ts_col < 0 || val_col < 0)
    throw SchemaError(source + ": header must provide timestamp and value columns");

  std::vector<Timestamp> stamps;
  std::vector<double> values;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split_csv_line(trimmed);
    if (static_cast<int>(fields.size()) <= std::max(ts_col, val_col))
      throw ParseError(source + ": row " + std::to_string(row) + ": too few fields");
    try {
      stamps.push_back(parse_timestamp(fields[ts_col]));
    } catch (const ParseError& e) {
      throw ParseError(source + ": row " + std::to_string(row) + ": " + e.what());
    }
    double v = 0;
    if (!detail::parse_double(fields[val_col], v))
      throw ParseError(source + ": row " + std::to_string(row) + ": bad value '" +
                       fields[val_col] + "'");
    if (kind != ProfileKind::Price && v < 0)
      throw ValidationError(source + ": row " + std::to_string(row) + ": negative " +
                            std::string(to_string(kind)) + " value");
    values.push_back(v);
  }
  if (values.empty()) throw ParseError(source + ": no data rows");

  int step = kMinutesPerDay;
  if (stamps.size() > 1) {
    const Timestamp d = stamps[1] - stamps[0];
    if (d <= 0) throw SchemaError(source + ": row 3: timestamps not strictly increasing");
    for (std::size_t i = 2; i < stamps.size(); ++i) {
      const Timestamp di = stamps[i] - stamps[i - 1];
      if (di <= 0)
        throw SchemaError(source + ": row " + std::to_string(i + 2) +
                          ": timestamps not strictly increasing");
      if (di != d)
        throw SchemaError(source + ": row " + std::to_string(i + 2) + ": spacing of " +
                          std::to_string(di) + " min breaks uniform step of " +
                          std::to_string(d) + " min");
    }
    if (d > kMinutesPerDay || kMinutesPerDay % d != 0)
      throw SchemaError(source + ": step of " + std::to_string(d) + " min does not divide a day");
    step = static_cast<int>(d);
  }

  Profile p;
  p.values = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  p.step_minutes = step;
  p.start = stamps.front();
  p.kind = kind;
  p.validate();
  return p;
}

Profile load_timeseries(const std::string& path,
                        const std::map<std::string, std::string>& column_map, ProfileKind kind) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return read_timeseries(in, column_map, kind, path);
}

void write_timeseries(std::ostream& out, const Profile& p) {
  out << "timestamp,value\n";
  for (Index i = 0; i < p.size(); ++i)
    out << format_timestamp(p.start + i * p.step_minutes) << ','
        << detail::format_double(p.values[i]) << '\n';
}

void save_timeseries(const std::string& path, const Profile& p) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  write_timeseries(out, p);
}

Profile resample(const Profile& p, int target_step) {
  if (target_step <= 0 || kMinutesPerDay % target_step != 0)
    throw ResampleError("target step " + std::to_string(target_step) +
                        " min does not divide a day");
  Profile out;
  out.start = p.start;
  out.kind = p.kind;
  out.step_minutes = target_step;
  if (target_step == p.step_minutes) {
    out.values = p.values;
  } else if (p.step_minutes % target_step == 0) {
    const Index k = p.step_minutes / target_step;
    out.values = p.values.transpose().replicate(k, 1).reshaped();
  } else if (target_step % p.step_minutes == 0) {
    const Index k = target_step / p.step_minutes;
    if (p.size() % k != 0)
      throw ResampleError("series of " + std::to_string(p.size()) +
                          " samples is not a whole number of " + std::to_string(target_step) +
                          "-min steps");
    out.values = p.values.reshaped(k, p.size() / k).colwise().mean().transpose();
  } else {
    throw ResampleError("steps " + std::to_string(p.step_minutes) + " and " +
                        std::to_string(target_step) + " min are incompatible");
  }
  return out;
}

}  // namespace bessplan
