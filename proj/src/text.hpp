#pragma once

#include "strongmax/grid.hpp"

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

namespace strongmax::text {

inline double parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("cannot parse number from '" + std::string(s) + "'");
  return v;
}

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto cut = s.find(sep, start);
    if (cut == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, cut - start));
    start = cut + 1;
  }
}

}  // namespace strongmax::text
