#include "vforge/textio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace vforge {

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<KeyValueEntry> parse_key_value_text(std::string_view text) {
  std::vector<KeyValueEntry> entries;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;

    size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": expected `key = value`, got `" + stripped + "`");
    }
    KeyValueEntry entry;
    entry.key = trim(std::string_view(stripped).substr(0, eq));
    entry.value = trim(std::string_view(stripped).substr(eq + 1));
    entry.line = line_no;
    if (entry.key.empty()) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": empty key");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

double parse_number(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw DomainError("empty numeric value");
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw DomainError("could not parse number `" + s + "`");
  }
  if (!std::isfinite(v)) throw DomainError("non-finite number `" + s + "`");
  return v;
}

}  // namespace

double parse_quantity(std::string_view text, Quantity kind,
                      bool bare_lengths_are_mm) {
  std::string s = trim(text);
  // Split a trailing alphabetic suffix off the number, if any.
  size_t suffix_begin = s.size();
  while (suffix_begin > 0 &&
         std::isalpha(static_cast<unsigned char>(s[suffix_begin - 1]))) {
    --suffix_begin;
  }
  // Guard against capturing the exponent of `1e-6` as a suffix.
  std::string suffix = to_lower(trim(std::string_view(s).substr(suffix_begin)));
  std::string number_part = trim(std::string_view(s).substr(0, suffix_begin));
  if (!number_part.empty() &&
      (number_part.back() == 'e' || number_part.back() == 'E' ||
       number_part.back() == '+' || number_part.back() == '-')) {
    suffix.clear();
    number_part = s;
  }
  if (number_part.empty()) {  // pure word, not a number
    throw DomainError("could not parse quantity `" + s + "`");
  }
  double v = parse_number(number_part);

  switch (kind) {
    case Quantity::Plain:
      if (!suffix.empty()) {
        throw DomainError("unexpected unit `" + suffix + "` on plain value `" +
                          s + "`");
      }
      return v;
    case Quantity::Length:
      if (suffix.empty()) return bare_lengths_are_mm ? v * 1e-3 : v;
      if (suffix == "m") return v;
      if (suffix == "cm") return v * 1e-2;
      if (suffix == "mm") return v * 1e-3;
      throw DomainError("unknown length unit `" + suffix + "` in `" + s + "`");
    case Quantity::Angle:
      if (suffix.empty() || suffix == "rad") return v;
      if (suffix == "deg") return v * std::numbers::pi / 180.0;
      throw DomainError("unknown angle unit `" + suffix + "` in `" + s + "`");
  }
  throw DomainError("unreachable quantity kind");
}

bool parse_bool(std::string_view text) {
  std::string s = to_lower(trim(text));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw DomainError("could not parse boolean `" + s + "`");
}

int parse_int(std::string_view text) {
  std::string s = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("could not parse integer `" + s + "`");
  }
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_bool(bool v) { return v ? "true" : "false"; }

}  // namespace vforge
