#pragma once
// Calendar and clock plumbing. All instants are UTC with second precision.
// Metadata date strings in dd/mm/yyyy form are parsed day-first and treated
// as UTC; no timezone conversions happen anywhere in the pipeline.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ma4bdi {

struct Date {
  int year = 0;
  int month = 0;  // 1..12
  int day = 0;    // 1..31

  auto operator<=>(const Date&) const = default;
};

struct TimeOfDay {
  int hour = 0;
  int minute = 0;
  int second = 0;

  auto operator<=>(const TimeOfDay&) const = default;

  int total_seconds() const { return (hour * 60 + minute) * 60 + second; }
  int total_minutes() const { return hour * 60 + minute; }
};

// Seconds since the Unix epoch, UTC.
class UtcTime {
 public:
  UtcTime() = default;
  explicit UtcTime(std::int64_t seconds) : seconds_(seconds) {}

  std::int64_t seconds() const { return seconds_; }
  auto operator<=>(const UtcTime&) const = default;

 private:
  std::int64_t seconds_ = 0;
};

// Proleptic Gregorian day arithmetic (epoch day 0 = 1970-01-01).
std::int64_t days_from_civil(int year, int month, int day);
Date civil_from_days(std::int64_t days);
bool is_valid_date(const Date& d);

UtcTime make_utc(const Date& d, const TimeOfDay& t);
Date date_of(UtcTime t);
TimeOfDay time_of(UtcTime t);
int weekday_of(UtcTime t);  // 0 = Sunday .. 6 = Saturday

// "YYYY-MM-DDTHH:MM[:SS]"; a space is accepted in place of 'T'.
UtcTime parse_timestamp(std::string_view text);
// "YYYY-MM-DD" or day-first "DD/MM/YYYY".
Date parse_date(std::string_view text);
// "HH:MM[:SS]".
TimeOfDay parse_time(std::string_view text);

std::string to_string(const Date& d);        // YYYY-MM-DD
std::string to_string(const TimeOfDay& t);   // HH:MM:SS
std::string to_string(UtcTime t);            // YYYY-MM-DDTHH:MM:SS

}  // namespace ma4bdi
