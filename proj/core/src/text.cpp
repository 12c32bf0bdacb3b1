#include "spacex/text.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <unordered_map>

namespace spacex {

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> word_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

// Folds the common two-byte UTF-8 accented Latin letters to ASCII.
// Keyed by the Unicode code point.
const std::unordered_map<std::uint32_t, std::string_view>& diacritic_folds() {
  static const std::unordered_map<std::uint32_t, std::string_view> map = [] {
    std::unordered_map<std::uint32_t, std::string_view> m;
    auto add = [&m](std::uint32_t lo, std::uint32_t hi, std::string_view repl) {
      for (std::uint32_t c = lo; c <= hi; ++c) m.emplace(c, repl);
    };
    add(0xC0, 0xC5, "a"); add(0xE0, 0xE5, "a");      // À..Å à..å
    add(0xC7, 0xC7, "c"); add(0xE7, 0xE7, "c");      // Ç ç
    add(0xC8, 0xCB, "e"); add(0xE8, 0xEB, "e");      // È..Ë è..ë
    add(0xCC, 0xCF, "i"); add(0xEC, 0xEF, "i");      // Ì..Ï ì..ï
    add(0xD1, 0xD1, "n"); add(0xF1, 0xF1, "n");      // Ñ ñ
    add(0xD2, 0xD6, "o"); add(0xF2, 0xF6, "o");      // Ò..Ö ò..ö
    add(0xD8, 0xD8, "o"); add(0xF8, 0xF8, "o");      // Ø ø
    add(0xD9, 0xDC, "u"); add(0xF9, 0xFC, "u");      // Ù..Ü ù..ü
    add(0xDD, 0xDD, "y"); add(0xFD, 0xFD, "y"); add(0xFF, 0xFF, "y");
    add(0xDF, 0xDF, "ss");                           // ß
    add(0xC6, 0xC6, "ae"); add(0xE6, 0xE6, "ae");    // Æ æ
    add(0xD0, 0xD0, "d"); add(0xF0, 0xF0, "d");      // Ð ð
    add(0xDE, 0xDE, "th"); add(0xFE, 0xFE, "th");    // Þ þ
    // Latin Extended-A: pairs of (accented, base) alternating; the base
    // letter follows the pattern c & ~1 groupings, easier as ranges.
    add(0x100, 0x105, "a"); add(0x106, 0x10D, "c"); add(0x10E, 0x111, "d");
    add(0x112, 0x11B, "e"); add(0x11C, 0x123, "g"); add(0x124, 0x127, "h");
    add(0x128, 0x131, "i"); add(0x134, 0x135, "j"); add(0x136, 0x138, "k");
    add(0x139, 0x142, "l"); add(0x143, 0x14B, "n"); add(0x14C, 0x151, "o");
    add(0x152, 0x153, "oe"); add(0x154, 0x159, "r"); add(0x15A, 0x161, "s");
    add(0x162, 0x167, "t"); add(0x168, 0x173, "u"); add(0x174, 0x175, "w");
    add(0x176, 0x178, "y"); add(0x179, 0x17E, "z");
    return m;
  }();
  return map;
}

}  // namespace

std::string normalize_name(std::string_view s) {
  std::string folded;
  folded.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      folded.push_back(static_cast<char>(std::tolower(c)));
      ++i;
    } else if ((c & 0xE0) == 0xC0 && i + 1 < s.size()) {
      const std::uint32_t cp = ((c & 0x1Fu) << 6) | (static_cast<unsigned char>(s[i + 1]) & 0x3Fu);
      auto it = diacritic_folds().find(cp);
      if (it != diacritic_folds().end()) {
        folded.append(it->second);
      } else {
        folded.append(s.substr(i, 2));
      }
      i += 2;
    } else {
      folded.push_back(s[i]);
      ++i;
    }
  }

  std::string out;
  out.reserve(folded.size());
  bool in_space = false;
  for (char c : folded) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool contains(std::string_view s, std::string_view needle) {
  return s.find(needle) != std::string_view::npos;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  // Normalize "-0.0000" to "0.0000".
  std::string s(buf);
  bool all_zero = true;
  for (char c : s)
    if (c >= '1' && c <= '9') all_zero = false;
  if (all_zero && !s.empty() && s[0] == '-') s.erase(0, 1);
  return s;
}

}  // namespace spacex
