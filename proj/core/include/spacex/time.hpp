#pragma once

#include <cstdint>
#include <string>

namespace spacex {

/// UTC timestamp with second precision.
struct UtcTime {
  std::int64_t seconds_since_epoch = 0;

  friend auto operator<=>(const UtcTime&, const UtcTime&) = default;
};

struct UtcDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  friend auto operator<=>(const UtcDate&, const UtcDate&) = default;
};

/// Days since 1970-01-01 for a proleptic-Gregorian civil date.
std::int64_t days_from_civil(int year, int month, int day);
UtcDate civil_from_days(std::int64_t days);

/// Calendar date (UTC) the timestamp falls on.
UtcDate utc_date_of(UtcTime t);

/// Parses "YYYY-MM-DDTHH:MM:SSZ". Also accepts a space separator,
/// fractional seconds (truncated) and "+00:00"/"-00:00" offsets applied
/// to the result. Throws TimestampParseError otherwise.
UtcTime parse_iso8601(const std::string& text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(UtcTime t);

inline double hours_between(UtcTime earlier, UtcTime later) {
  return static_cast<double>(later.seconds_since_epoch - earlier.seconds_since_epoch) / 3600.0;
}

}  // namespace spacex
