#include "spacex/time.hpp"

#include <cctype>
#include <cstdio>

#include "spacex/errors.hpp"

namespace spacex {

// Howard Hinnant's proleptic-Gregorian conversions.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;  // [0, 365]
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

UtcDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return UtcDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

UtcDate utc_date_of(UtcTime t) {
  std::int64_t s = t.seconds_since_epoch;
  std::int64_t days = s / 86400;
  if (s % 86400 < 0) --days;
  return civil_from_days(days);
}

namespace {

bool read_digits(const std::string& s, std::size_t& pos, int count, int& out) {
  out = 0;
  for (int i = 0; i < count; ++i) {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
    out = out * 10 + (s[pos] - '0');
    ++pos;
  }
  return true;
}

}  // namespace

UtcTime parse_iso8601(const std::string& text) {
  const auto fail = [&]() -> UtcTime {
    throw TimestampParseError("cannot parse timestamp '" + text + "'");
  };

  std::size_t pos = 0;
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!read_digits(text, pos, 4, year)) return fail();
  if (pos >= text.size() || text[pos] != '-') return fail();
  ++pos;
  if (!read_digits(text, pos, 2, month)) return fail();
  if (pos >= text.size() || text[pos] != '-') return fail();
  ++pos;
  if (!read_digits(text, pos, 2, day)) return fail();
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' ')) return fail();
  ++pos;
  if (!read_digits(text, pos, 2, hour)) return fail();
  if (pos >= text.size() || text[pos] != ':') return fail();
  ++pos;
  if (!read_digits(text, pos, 2, minute)) return fail();
  if (pos >= text.size() || text[pos] != ':') return fail();
  ++pos;
  if (!read_digits(text, pos, 2, second)) return fail();

  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
    return fail();

  // Fractional seconds are truncated.
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  std::int64_t offset = 0;
  if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
    ++pos;
  } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    const int sign = text[pos] == '+' ? 1 : -1;
    ++pos;
    int oh = 0, om = 0;
    if (!read_digits(text, pos, 2, oh)) return fail();
    if (pos < text.size() && text[pos] == ':') ++pos;
    if (!read_digits(text, pos, 2, om)) return fail();
    offset = sign * (oh * 3600 + om * 60);
  } else {
    return fail();
  }
  if (pos != text.size()) return fail();

  const std::int64_t days = days_from_civil(year, month, day);
  return UtcTime{days * 86400 + hour * 3600 + minute * 60 + second - offset};
}

std::string format_iso8601(UtcTime t) {
  std::int64_t s = t.seconds_since_epoch;
  std::int64_t days = s / 86400;
  std::int64_t rem = s % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const UtcDate d = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year, d.month, d.day,
                static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60),
                static_cast<int>(rem % 60));
  return buf;
}

}  // namespace spacex
