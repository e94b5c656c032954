#include "ma4bdi/time.hpp"

#include <charconv>
#include <cstdio>

#include "ma4bdi/error.hpp"

namespace ma4bdi {

namespace {

bool parse_int_span(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  const char* first = text.data() + pos;
  for (std::size_t i = 0; i < len; ++i) {
    if (first[i] < '0' || first[i] > '9') return false;
  }
  auto res = std::from_chars(first, first + len, out);
  return res.ec == std::errc{} && res.ptr == first + len;
}

[[noreturn]] void bad_timestamp(std::string_view text) {
  throw Error(ErrorKind::malformed_timestamp,
              "cannot parse timestamp '" + std::string(text) + "'");
}

}  // namespace

std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

bool is_valid_date(const Date& d) {
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return false;
  return civil_from_days(days_from_civil(d.year, d.month, d.day)) == d;
}

UtcTime make_utc(const Date& d, const TimeOfDay& t) {
  return UtcTime(days_from_civil(d.year, d.month, d.day) * 86400 + t.total_seconds());
}

Date date_of(UtcTime t) {
  std::int64_t s = t.seconds();
  std::int64_t days = s / 86400;
  if (s % 86400 < 0) --days;
  return civil_from_days(days);
}

TimeOfDay time_of(UtcTime t) {
  std::int64_t s = t.seconds() % 86400;
  if (s < 0) s += 86400;
  return TimeOfDay{static_cast<int>(s / 3600), static_cast<int>((s / 60) % 60),
                   static_cast<int>(s % 60)};
}

int weekday_of(UtcTime t) {
  std::int64_t s = t.seconds();
  std::int64_t z = s / 86400;
  if (s % 86400 < 0) --z;
  return static_cast<int>(z >= -4 ? (z + 4) % 7 : (z + 5) % 7 + 6);
}

UtcTime parse_timestamp(std::string_view text) {
  // YYYY-MM-DD{T| }HH:MM[:SS]
  if (text.size() != 16 && text.size() != 19) bad_timestamp(text);
  int y, mo, d, h, mi, s = 0;
  if (!parse_int_span(text, 0, 4, y) || text[4] != '-' ||
      !parse_int_span(text, 5, 2, mo) || text[7] != '-' ||
      !parse_int_span(text, 8, 2, d) ||
      (text[10] != 'T' && text[10] != ' ') ||
      !parse_int_span(text, 11, 2, h) || text[13] != ':' ||
      !parse_int_span(text, 14, 2, mi)) {
    bad_timestamp(text);
  }
  if (text.size() == 19) {
    if (text[16] != ':' || !parse_int_span(text, 17, 2, s)) bad_timestamp(text);
  }
  const Date date{y, mo, d};
  if (!is_valid_date(date) || h > 23 || mi > 59 || s > 59) bad_timestamp(text);
  return make_utc(date, TimeOfDay{h, mi, s});
}

Date parse_date(std::string_view text) {
  int a, b, c;
  Date d;
  if (text.size() == 10 && text[4] == '-' && text[7] == '-' &&
      parse_int_span(text, 0, 4, a) && parse_int_span(text, 5, 2, b) &&
      parse_int_span(text, 8, 2, c)) {
    d = Date{a, b, c};
  } else if (text.size() == 10 && text[2] == '/' && text[5] == '/' &&
             parse_int_span(text, 0, 2, a) && parse_int_span(text, 3, 2, b) &&
             parse_int_span(text, 6, 4, c)) {
    d = Date{c, b, a};  // day-first
  } else {
    throw Error(ErrorKind::malformed_timestamp,
                "cannot parse date '" + std::string(text) + "'");
  }
  if (!is_valid_date(d)) {
    throw Error(ErrorKind::malformed_timestamp,
                "date '" + std::string(text) + "' is out of range");
  }
  return d;
}

TimeOfDay parse_time(std::string_view text) {
  int h, m, s = 0;
  bool ok = false;
  if (text.size() == 5 && text[2] == ':') {
    ok = parse_int_span(text, 0, 2, h) && parse_int_span(text, 3, 2, m);
  } else if (text.size() == 8 && text[2] == ':' && text[5] == ':') {
    ok = parse_int_span(text, 0, 2, h) && parse_int_span(text, 3, 2, m) &&
         parse_int_span(text, 6, 2, s);
  }
  if (!ok || h > 23 || m > 59 || s > 59) {
    throw Error(ErrorKind::malformed_timestamp,
                "cannot parse time '" + std::string(text) + "'");
  }
  return TimeOfDay{h, m, s};
}

std::string to_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::string to_string(const TimeOfDay& t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", t.hour, t.minute, t.second);
  return buf;
}

std::string to_string(UtcTime t) {
  return to_string(date_of(t)) + "T" + to_string(time_of(t));
}

}  // namespace ma4bdi
