#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace forestnav {

// Shortest round-trip decimal form; keeps CSV output lossless and
// byte-deterministic.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, bool& ok) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  ok = res.ec == std::errc() && res.ptr == s.data() + s.size();
  return v;
}

}  // namespace forestnav
