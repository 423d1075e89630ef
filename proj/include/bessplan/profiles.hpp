#pragma once

#include <Eigen/Core>

#include <array>
#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bessplan {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr int kMinutesPerDay = 1440;

enum class ProfileKind { Demand, Solar, Wind, Price };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view name);

/// Minutes since 1970-01-01T00:00 in local standard time (no DST).
using Timestamp = std::int64_t;

Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);
Timestamp to_timestamp(std::chrono::year_month_day date, int minute_of_day = 0);
std::chrono::year_month_day date_of(Timestamp t);

/// Uniformly sampled series. Power in MW, price in $/MWh.
struct Profile {
  Vector values;
  int step_minutes = 15;
  Timestamp start = 0;
  ProfileKind kind = ProfileKind::Demand;

  Index size() const { return values.size(); }
  int samples_per_day() const { return kMinutesPerDay / step_minutes; }
  /// Number of complete days covered.
  Index num_days() const { return values.size() / samples_per_day(); }
  /// Slice of day `d` (0-based) as a daily profile.
  Profile day(Index d) const;
  std::chrono::year_month_day date_of_day(Index d) const;
  /// Σ value·step in value-hours (MWh for power profiles).
  double energy() const { return values.sum() * step_minutes / 60.0; }

  /// Throws ValidationError when an invariant is broken.
  void validate() const;
};

Profile make_daily(Vector values, ProfileKind kind, int step_minutes = 15);

enum class DayType { SWD = 0, SED = 1, NSWD = 2, NSED = 3 };
inline constexpr std::array<DayType, 4> kAllDayTypes = {DayType::SWD, DayType::SED, DayType::NSWD,
                                                        DayType::NSED};

std::string_view to_string(DayType t);
DayType parse_day_type(std::string_view name);
inline bool is_summer(DayType t) { return t == DayType::SWD || t == DayType::SED; }
inline bool is_weekend(DayType t) { return t == DayType::SED || t == DayType::NSED; }

template <class T>
using DayTypeMap = std::array<T, 4>;

template <class T>
T& at(DayTypeMap<T>& m, DayType t) {
  return m[static_cast<std::size_t>(t)];
}
template <class T>
const T& at(const DayTypeMap<T>& m, DayType t) {
  return m[static_cast<std::size_t>(t)];
}

struct MonthDay {
  unsigned month = 1;
  unsigned day = 1;
  auto operator<=>(const MonthDay&) const = default;
};

MonthDay parse_month_day(std::string_view text);  // "MM-DD"

struct CalendarRule {
  MonthDay summer_start{5, 1};
  MonthDay summer_end{10, 31};
  /// Indexed by std::chrono::weekday::c_encoding() (0 = Sunday).
  std::array<bool, 7> weekend{true, false, false, false, false, false, true};

  void validate() const;
  bool in_summer(std::chrono::year_month_day date) const;
};

DayType classify_day(std::chrono::year_month_day date, const CalendarRule& rule);
DayTypeMap<int> day_counts(int year, const CalendarRule& rule);

/// `column_map` maps CSV header names to the roles "timestamp" and "value";
/// an empty map means the header is literally `timestamp,value`.
Profile read_timeseries(std::istream& in, const std::map<std::string, std::string>& column_map,
                        ProfileKind kind, const std::string& source = "<stream>");
Profile load_timeseries(const std::string& path,
                        const std::map<std::string, std::string>& column_map, ProfileKind kind);
void write_timeseries(std::ostream& out, const Profile& p);
void save_timeseries(const std::string& path, const Profile& p);

/// Hold when upsampling, mean when downsampling.
Profile resample(const Profile& p, int target_step);

}  // namespace bessplan
