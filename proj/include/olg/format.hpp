#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <system_error>

namespace olg {

/// Locale-independent number rendering used by every emitted file: 12
/// significant digits, general format, '.' decimal separator, trailing
/// zeros trimmed.  Identical input bits always yield identical text.
inline std::string format_number(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline std::string format_number(long v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace olg
