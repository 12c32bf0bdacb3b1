#include "spacex/complexity.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "spacex/text.hpp"

namespace spacex::complexity {

namespace {

bool looks_binary(const std::string& text) {
  const std::size_t probe = std::min<std::size_t>(text.size(), 8000);
  for (std::size_t i = 0; i < probe; ++i)
    if (text[i] == '\0') return true;
  return false;
}

// ---------------------------------------------------------------------------
// C-like languages: strip comments and literals, then match
// `identifier ( ... ) ... {` function heads and brace-delimited bodies.
// ---------------------------------------------------------------------------

std::string strip_clike(const std::string& src) {
  std::string out;
  out.reserve(src.size());
  enum class State { code, line_comment, block_comment, dquote, squote };
  State state = State::code;
  bool line_start = true;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const char c = src[i];
    const char next = i + 1 < src.size() ? src[i + 1] : '\0';
    switch (state) {
      case State::code:
        if (line_start && c == '#') {
          // Preprocessor line: blank it out (respects trailing \ contin.).
          while (i < src.size() && src[i] != '\n') {
            if (src[i] == '\\' && i + 1 < src.size() && src[i + 1] == '\n') {
              out.push_back('\n');
              ++i;
            }
            ++i;
          }
          out.push_back('\n');
          line_start = true;
          continue;
        }
        if (c == '/' && next == '/') {
          state = State::line_comment;
          ++i;
        } else if (c == '/' && next == '*') {
          state = State::block_comment;
          ++i;
        } else if (c == '"') {
          state = State::dquote;
          out.push_back(' ');
        } else if (c == '\'') {
          state = State::squote;
          out.push_back(' ');
        } else {
          out.push_back(c);
        }
        break;
      case State::line_comment:
        if (c == '\n') {
          state = State::code;
          out.push_back('\n');
        }
        break;
      case State::block_comment:
        if (c == '*' && next == '/') {
          state = State::code;
          ++i;
        } else if (c == '\n') {
          out.push_back('\n');
        }
        break;
      case State::dquote:
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          state = State::code;
        }
        break;
      case State::squote:
        if (c == '\\') {
          ++i;
        } else if (c == '\'') {
          state = State::code;
        }
        break;
    }
    line_start = c == '\n';
  }
  return out;
}

struct Token {
  enum class Kind { ident, punct } kind;
  std::string text;
};

std::vector<Token> tokenize_clike(const std::string& code) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const auto is_ident = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '~';
  };
  while (i < code.size()) {
    const char c = code[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_ident(c)) {
      std::size_t j = i;
      while (j < code.size() && is_ident(code[j])) ++j;
      tokens.push_back({Token::Kind::ident, code.substr(i, j - i)});
      i = j;
      continue;
    }
    if ((c == '&' || c == '|') && i + 1 < code.size() && code[i + 1] == c) {
      tokens.push_back({Token::Kind::punct, std::string(2, c)});
      i += 2;
      continue;
    }
    tokens.push_back({Token::Kind::punct, std::string(1, c)});
    ++i;
  }
  return tokens;
}

const std::unordered_set<std::string>& clike_control_keywords() {
  static const std::unordered_set<std::string> kw = {
      "if",   "else",  "for",    "while",  "switch", "catch",  "return",
      "do",   "new",   "delete", "throw",  "sizeof", "case",   "default",
      "goto", "using", "typedef"};
  return kw;
}

bool is_branch_token_clike(const Token& t) {
  if (t.kind == Token::Kind::ident)
    return t.text == "if" || t.text == "elif" || t.text == "for" || t.text == "while" ||
           t.text == "case" || t.text == "catch";
  return t.text == "&&" || t.text == "||" || t.text == "?";
}

std::vector<int> methods_clike(const std::string& src) {
  const std::vector<Token> tokens = tokenize_clike(strip_clike(src));
  std::vector<int> out;

  std::size_t i = 0;
  while (i < tokens.size()) {
    // Candidate head: ident '(' ... ')' [anything but ';' '{' '}'] '{'
    if (tokens[i].kind != Token::Kind::ident || clike_control_keywords().count(tokens[i].text)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (j >= tokens.size() || tokens[j].text != "(") {
      ++i;
      continue;
    }
    int paren = 0;
    while (j < tokens.size()) {
      if (tokens[j].text == "(") ++paren;
      if (tokens[j].text == ")" && --paren == 0) break;
      ++j;
    }
    if (j >= tokens.size()) break;
    // Scan past trailing specifiers (const, noexcept, ->T, ctor inits).
    std::size_t k = j + 1;
    bool found_body = false;
    int trail_paren = 0;
    while (k < tokens.size()) {
      const std::string& t = tokens[k].text;
      if (trail_paren == 0 && (t == ";" || t == "}")) break;
      if (t == "(") ++trail_paren;
      if (t == ")") --trail_paren;
      if (trail_paren == 0 && t == "{") {
        found_body = true;
        break;
      }
      if (t == "=") break;  // `= default`, `= 0`, initializers
      ++k;
    }
    if (!found_body) {
      ++i;
      continue;
    }
    // Body: match braces from k.
    int depth = 0;
    int branches = 0;
    std::size_t b = k;
    for (; b < tokens.size(); ++b) {
      if (tokens[b].text == "{") ++depth;
      if (tokens[b].text == "}" && --depth == 0) break;
      if (depth > 0 && is_branch_token_clike(tokens[b])) ++branches;
    }
    out.push_back(1 + branches);
    i = std::min(b + 1, tokens.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Python: innermost enclosing `def` owns each line's branch tokens.
// ---------------------------------------------------------------------------

std::string strip_python_line(const std::string& line, int& triple_state) {
  // triple_state: 0 = none, 1 = inside ''' , 2 = inside """
  std::string out;
  std::size_t i = 0;
  int quote = 0;  // 0 none, 1 single, 2 double (single-line strings)
  while (i < line.size()) {
    const char c = line[i];
    if (triple_state != 0) {
      const char q = triple_state == 1 ? '\'' : '"';
      if (c == q && line.compare(i, 3, std::string(3, q)) == 0) {
        triple_state = 0;
        i += 3;
        continue;
      }
      ++i;
      continue;
    }
    if (quote != 0) {
      const char q = quote == 1 ? '\'' : '"';
      if (c == '\\') {
        i += 2;
        continue;
      }
      if (c == q) quote = 0;
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '\'' || c == '"') {
      const char q = c;
      if (line.compare(i, 3, std::string(3, q)) == 0) {
        triple_state = q == '\'' ? 1 : 2;
        i += 3;
        continue;
      }
      quote = q == '\'' ? 1 : 2;
      ++i;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

int python_indent(const std::string& line) {
  int indent = 0;
  for (char c : line) {
    if (c == ' ')
      ++indent;
    else if (c == '\t')
      indent += 8 - indent % 8;
    else
      break;
  }
  return indent;
}

bool is_branch_word_python(const std::string& w) {
  return w == "if" || w == "elif" || w == "for" || w == "while" || w == "case" ||
         w == "except" || w == "and" || w == "or";
}

std::vector<int> methods_python(const std::string& src) {
  struct OpenDef {
    int indent;
    int complexity;
  };
  std::vector<OpenDef> stack;
  std::vector<int> out;
  int triple_state = 0;

  auto close_to_indent = [&](int indent) {
    while (!stack.empty() && stack.back().indent >= indent) {
      out.push_back(stack.back().complexity);
      stack.pop_back();
    }
  };

  for (const auto& raw_line : split(src, '\n')) {
    const bool was_in_triple = triple_state != 0;
    const std::string code = strip_python_line(raw_line, triple_state);
    if (was_in_triple) continue;  // inside (or closing) a triple-quoted string
    const std::string stripped = trim(code);
    if (stripped.empty()) continue;
    const int indent = python_indent(code);

    const auto words = word_tokens(code);
    const bool is_def = !words.empty() && (words.front() == "def" ||
                                           (words.size() > 1 && words.front() == "async" &&
                                            words[1] == "def"));
    close_to_indent(indent);
    if (is_def) {
      stack.push_back({indent, 1});
    }
    if (!stack.empty()) {
      int& c = stack.back().complexity;
      for (const auto& w : words)
        if (is_branch_word_python(w)) ++c;
    }
  }
  close_to_indent(0);
  // Methods close in reverse nesting order; report in source order.
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::string language_for_hint(const std::string& hint) {
  static const std::unordered_map<std::string, std::string> map = {
      {"c", "clike"},     {"h", "clike"},      {"cc", "clike"},    {"cpp", "clike"},
      {"cxx", "clike"},   {"hpp", "clike"},    {"hh", "clike"},    {"hxx", "clike"},
      {"java", "clike"},  {"js", "clike"},     {"jsx", "clike"},   {"ts", "clike"},
      {"tsx", "clike"},   {"go", "clike"},     {"rs", "clike"},    {"cs", "clike"},
      {"php", "clike"},   {"swift", "clike"},  {"kt", "clike"},    {"scala", "clike"},
      {"m", "clike"},     {"mm", "clike"},     {"py", "python"},   {"pyi", "python"},
      {"clike", "clike"}, {"python", "python"}};
  auto it = map.find(to_lower_ascii(hint));
  return it == map.end() ? std::string() : it->second;
}

std::string language_for_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || dot + 1 >= path.size()) return {};
  const auto slash = path.rfind('/');
  if (slash != std::string::npos && slash > dot) return {};
  return language_for_hint(path.substr(dot + 1));
}

std::vector<int> estimate_complexity(const std::string& source_text,
                                     const std::string& language_hint) {
  if (looks_binary(source_text)) return {};
  std::string lang = language_for_hint(language_hint);
  if (lang.empty() && language_hint.empty()) {
    // Cheap guess when no hint was given.
    if (source_text.find("def ") != std::string::npos &&
        source_text.find(':') != std::string::npos && source_text.find('{') == std::string::npos)
      lang = "python";
    else if (source_text.find('{') != std::string::npos)
      lang = "clike";
  }
  if (lang == "clike") return methods_clike(source_text);
  if (lang == "python") return methods_python(source_text);
  return {};
}

}  // namespace spacex::complexity
