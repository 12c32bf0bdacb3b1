#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace spacex {

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);

/// Lowercase word tokens: maximal runs of [a-z0-9_] after ASCII lowering.
/// Everything else is a separator.
std::vector<std::string> word_tokens(std::string_view s);

/// Identity normalization used for de-aliasing: lowercase, collapse runs
/// of whitespace to single spaces, strip common Latin diacritics
/// (UTF-8 Latin-1 Supplement and Latin Extended-A fold to ASCII).
std::string normalize_name(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);
bool contains(std::string_view s, std::string_view needle);

std::vector<std::string> split(std::string_view s, char sep);

/// Shortest round-trip decimal form (std::to_chars); deterministic across
/// runs. Integral doubles render without an exponent or trailing ".0".
std::string format_double(double v);

/// Fixed-decimal rendering for report tables.
std::string format_fixed(double v, int decimals);

}  // namespace spacex
