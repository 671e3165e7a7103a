#pragma once

#include "strongmax/grid.hpp"

#include <utility>
#include <vector>

namespace strongmax {

using Interval = std::pair<Index, Index>;

/// Candidate [lo, hi) intervals on one axis for a basis, ordered by (lo, hi).
/// Dyadic yields [k 2^j, (k+1) 2^j); every other basis yields all intervals.
std::vector<Interval> axis_intervals(Index extent, const RectBasis& basis);

/// Visits every basis rectangle in the deterministic enumeration order:
/// lexicographic over per-axis interval lists, axis 0 outermost.
template <typename F>
void for_each_rect(const Dims& dims, const RectBasis& basis, F&& fn) {
  basis.validate(dims);
  const int n = dims.rank();
  std::vector<std::vector<Interval>> axes(n);
  for (int l = 0; l < n; ++l) axes[l] = axis_intervals(dims[l], basis);
  std::array<std::size_t, kMaxDims> idx{};
  Rect r;
  r.rank = n;
  while (true) {
    for (int l = 0; l < n; ++l) {
      r.lo[l] = axes[l][idx[l]].first;
      r.hi[l] = axes[l][idx[l]].second;
    }
    if (basis.admits(r)) fn(r);
    int l = n - 1;
    while (l >= 0) {
      if (++idx[l] < axes[l].size()) break;
      idx[l] = 0;
      --l;
    }
    if (l < 0) return;
  }
}

std::vector<Rect> enumerate_rects(const Dims& dims, const RectBasis& basis);

/// Exactly the basis rectangles containing x, in enumeration order.
std::vector<Rect> rects_containing(const Point& x, const Dims& dims, const RectBasis& basis);

/// Size of the enumeration without materialising it.
Index count_rects(const Dims& dims, const RectBasis& basis);

/// One group of basis rectangles sharing side lengths. Anchors (lower corners)
/// run over lo_l = k * stride_l with lo_l + side_l <= N_l.
struct SideTuple {
  Point side{};
  Point stride{};
};

/// The side-length groups that partition a basis.
std::vector<SideTuple> side_tuples(const Dims& dims, const RectBasis& basis);

/// Number of distinct values among the sides of r.
int distinct_sides(const Rect& r);

bool is_power_of_two(Index v);

}  // namespace strongmax
