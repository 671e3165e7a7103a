#include "strongmax/rects.hpp"

#include <algorithm>
#include <charconv>
#include <string>

namespace strongmax {

namespace {

Index parse_index(std::string_view text, std::string_view what) {
  Index v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  return v;
}

}  // namespace

Dims Dims::parse(std::string_view text) {
  std::vector<Index> extents;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t cut = text.find('x', start);
    const std::string_view piece =
        text.substr(start, cut == std::string_view::npos ? std::string_view::npos : cut - start);
    extents.push_back(parse_index(piece, "dims"));
    if (cut == std::string_view::npos) break;
    start = cut + 1;
  }
  return Dims(std::span<const Index>(extents));
}

RectBasis RectBasis::parse(std::string_view text) {
  if (text == "all" || text == "rects") return all();
  if (text == "dyadic") return dyadic();
  if (text == "cubes") return cubes();
  constexpr std::string_view prefix = "complexity:";
  if (text.substr(0, prefix.size()) == prefix)
    return complexity(static_cast<int>(parse_index(text.substr(prefix.size()), "complexity")));
  throw ConfigError("unknown basis '" + std::string(text) + "'");
}

std::string RectBasis::name() const {
  switch (kind) {
    case Kind::AllRects: return "all";
    case Kind::Dyadic: return "dyadic";
    case Kind::Cubes: return "cubes";
    case Kind::Complexity: return "complexity:" + std::to_string(c);
  }
  return "?";
}

void RectBasis::validate(const Dims& dims) const {
  if (kind == Kind::Complexity && (c < 1 || c > dims.rank()))
    throw ConfigError("complexity c=" + std::to_string(c) + " outside 1.." +
                      std::to_string(dims.rank()));
  if (kind == Kind::Dyadic)
    for (int l = 0; l < dims.rank(); ++l)
      if (!is_power_of_two(dims[l]))
        throw ConfigError("dyadic basis needs power-of-2 dims, got " + dims.to_string());
}

int distinct_sides(const Rect& r) {
  std::array<Index, kMaxDims> s{};
  for (int l = 0; l < r.rank; ++l) s[l] = r.side(l);
  std::sort(s.begin(), s.begin() + r.rank);
  return static_cast<int>(std::unique(s.begin(), s.begin() + r.rank) - s.begin());
}

bool RectBasis::admits(const Rect& r) const {
  switch (kind) {
    case Kind::AllRects: return true;
    case Kind::Cubes: return distinct_sides(r) == 1;
    case Kind::Complexity: return distinct_sides(r) <= c;
    case Kind::Dyadic:
      for (int l = 0; l < r.rank; ++l) {
        const Index s = r.side(l);
        if (!is_power_of_two(s) || r.lo[l] % s != 0) return false;
      }
      return true;
  }
  return false;
}

bool is_power_of_two(Index v) { return v > 0 && (v & (v - 1)) == 0; }

std::vector<Interval> axis_intervals(Index extent, const RectBasis& basis) {
  std::vector<Interval> out;
  if (basis.kind == RectBasis::Kind::Dyadic) {
    for (Index lo = 0; lo < extent; ++lo)
      for (Index s = 1; lo + s <= extent; s *= 2)
        if (lo % s == 0) out.emplace_back(lo, lo + s);
    return out;
  }
  out.reserve(static_cast<std::size_t>(extent * (extent + 1) / 2));
  for (Index lo = 0; lo < extent; ++lo)
    for (Index hi = lo + 1; hi <= extent; ++hi) out.emplace_back(lo, hi);
  return out;
}

std::vector<Rect> enumerate_rects(const Dims& dims, const RectBasis& basis) {
  std::vector<Rect> out;
  for_each_rect(dims, basis, [&](const Rect& r) { out.push_back(r); });
  return out;
}

std::vector<Rect> rects_containing(const Point& x, const Dims& dims, const RectBasis& basis) {
  basis.validate(dims);
  const int n = dims.rank();
  for (int l = 0; l < n; ++l)
    if (x[l] < 0 || x[l] >= dims[l]) throw std::domain_error("point outside the lattice");
  std::vector<std::vector<Interval>> axes(n);
  for (int l = 0; l < n; ++l) {
    for (const auto& iv : axis_intervals(dims[l], basis))
      if (iv.first <= x[l] && x[l] < iv.second) axes[l].push_back(iv);
  }
  std::vector<Rect> out;
  std::array<std::size_t, kMaxDims> idx{};
  Rect r;
  r.rank = n;
  while (true) {
    for (int l = 0; l < n; ++l) {
      r.lo[l] = axes[l][idx[l]].first;
      r.hi[l] = axes[l][idx[l]].second;
    }
    if (basis.admits(r)) out.push_back(r);
    int l = n - 1;
    while (l >= 0) {
      if (++idx[l] < axes[l].size()) break;
      idx[l] = 0;
      --l;
    }
    if (l < 0) break;
  }
  return out;
}

Index count_rects(const Dims& dims, const RectBasis& basis) {
  basis.validate(dims);
  if (basis.kind == RectBasis::Kind::AllRects || basis.kind == RectBasis::Kind::Dyadic) {
    Index total = 1;
    for (int l = 0; l < dims.rank(); ++l)
      total *= static_cast<Index>(axis_intervals(dims[l], basis).size());
    return total;
  }
  Index total = 0;
  for (const auto& t : side_tuples(dims, basis)) {
    Index anchors = 1;
    for (int l = 0; l < dims.rank(); ++l) anchors *= dims[l] - t.side[l] + 1;
    total += anchors;
  }
  return total;
}

std::vector<SideTuple> side_tuples(const Dims& dims, const RectBasis& basis) {
  basis.validate(dims);
  const int n = dims.rank();
  const bool dyadic = basis.kind == RectBasis::Kind::Dyadic;
  std::vector<SideTuple> out;
  SideTuple t;
  for (int l = 0; l < n; ++l) t.side[l] = 1;
  Rect probe;
  probe.rank = n;
  while (true) {
    bool keep = true;
    for (int l = 0; l < n; ++l) {
      probe.lo[l] = 0;
      probe.hi[l] = t.side[l];
      if (dyadic && !is_power_of_two(t.side[l])) keep = false;
    }
    if (keep && (dyadic || basis.admits(probe))) {
      for (int l = 0; l < n; ++l) t.stride[l] = dyadic ? t.side[l] : 1;
      out.push_back(t);
    }
    int l = n - 1;
    while (l >= 0) {
      if (++t.side[l] <= dims[l]) break;
      t.side[l] = 1;
      --l;
    }
    if (l < 0) break;
  }
  return out;
}

}  // namespace strongmax
