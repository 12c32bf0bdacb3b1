#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spacex {

/// RFC 4180 CSV writer with LF line endings. Fields containing commas,
/// quotes, CR or LF are quoted; quotes are doubled.
class CsvWriter {
public:
  CsvWriter& row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

  static std::string escape_field(std::string_view field);

private:
  std::string out_;
};

/// Parses CSV text into rows of fields (RFC 4180, LF or CRLF).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Empty CSV field for "missing" per the dataset contracts.
std::string csv_opt(const std::optional<double>& v);
std::string csv_opt_count(const std::optional<long long>& v);

}  // namespace spacex
