#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace frenetkit {

/// Shortest decimal form that round-trips to the same double, so the
/// sub-1e-4 m transform guarantees survive serialization.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace frenetkit
