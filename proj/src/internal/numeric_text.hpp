#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "featbench/errors.hpp"

namespace featbench::internal {

/// Shortest decimal text that parses back to exactly the same double.
/// Locale-free, so CSV output is byte-stable across environments.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw InternalError("double formatting failed");
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ValidationError("malformed number in " + what + ": \"" +
                          std::string(text) + "\"");
  }
  return v;
}

inline long parse_long(std::string_view text, const std::string& what) {
  long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ValidationError("malformed integer in " + what + ": \"" +
                          std::string(text) + "\"");
  }
  return v;
}

}  // namespace featbench::internal
