#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace relulab {

// Shortest decimal text that parses back to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace relulab
