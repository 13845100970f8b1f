#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vforge/errors.hpp"

namespace vforge {

// One `key = value` line from a config-style text file.
struct KeyValueEntry {
  std::string key;
  std::string value;
  int line = 0;  // 1-based line number in the source text
};

// Parses a config-style text: one `key = value` pair per line, `#` starts a
// comment, blank lines ignored.  Keys may repeat; order is preserved.
// Malformed lines raise ValidationError naming the line number.
std::vector<KeyValueEntry> parse_key_value_text(std::string_view text);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Kinds of physical quantity a text field may carry.  Used to decide which
// unit suffixes are legal and what the bare-number unit is.
enum class Quantity { Plain, Length, Angle };

// Parses a numeric value with an optional unit suffix.  Lengths accept
// mm/cm/m (bare numbers are meters unless `bare_lengths_are_mm`), angles
// accept deg/rad (bare numbers are radians).  Plain values take no suffix.
// Raises DomainError on anything unparseable.
double parse_quantity(std::string_view text, Quantity kind,
                      bool bare_lengths_are_mm = false);

bool parse_bool(std::string_view text);
int parse_int(std::string_view text);

// Formats a double with enough digits to be stable across runs but short
// enough to read (%.9g).  All report/plan serialization goes through this.
std::string format_double(double v);
std::string format_bool(bool v);

}  // namespace vforge
