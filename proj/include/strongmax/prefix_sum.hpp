#pragma once

#include "strongmax/grid.hpp"

#include <type_traits>
#include <vector>

namespace strongmax {

/// Accumulator wide enough that 2^n-corner inclusion-exclusion stays accurate
/// for small rectangles far from the origin.
template <typename Scalar>
using accumulator_t =
    std::conditional_t<std::is_floating_point_v<Scalar>, long double, Scalar>;

/// n-dimensional cumulative sums: entry at p holds the sum over [0, p).
/// Built in O(n * prod (N_l + 1)); rectangle sums are O(2^n).
template <typename Scalar>
class PrefixSum {
 public:
  using Accum = accumulator_t<Scalar>;

  PrefixSum() = default;
  explicit PrefixSum(const GridFunction<Scalar>& g)
      : dims_(g.dims()), cell_measure_(g.cell_measure()) {
    const int n = dims_.rank();
    Index total = 1;
    for (int l = n - 1; l >= 0; --l) {
      stride_[l] = total;
      total *= dims_[l] + 1;
    }
    table_.assign(static_cast<std::size_t>(total), Accum(0));

    // Scatter values to the shifted position p + 1.
    for (Index k = 0; k < g.size(); ++k) {
      const Point x = g.point(k);
      Index t = 0;
      for (int l = 0; l < n; ++l) t += (x[l] + 1) * stride_[l];
      table_[t] = static_cast<Accum>(g[k]);
    }
    // Running sums along each axis in turn.
    for (int axis = 0; axis < n; ++axis) {
      const Index s = stride_[axis];
      const Index len = dims_[axis] + 1;
      for (Index t = 0; t < total; ++t) {
        const Index coord = (t / s) % len;
        if (coord > 0) table_[t] += table_[t - s];
      }
    }
    corner_offsets();
  }

  const Dims& dims() const { return dims_; }
  Scalar cell_measure() const { return cell_measure_; }

  /// Raw table entry: sum of values (no cell measure) over [0, p).
  Accum corner(const Point& p) const {
    Index t = 0;
    for (int l = 0; l < dims_.rank(); ++l) t += p[l] * stride_[l];
    return table_[t];
  }

  /// Sum of values over r without the cell measure and without bounds checks.
  Accum raw_sum(const Rect& r) const {
    Index base = 0;
    for (int l = 0; l < dims_.rank(); ++l) base += r.lo[l] * stride_[l];
    Index extent[kMaxDims];
    for (int l = 0; l < dims_.rank(); ++l) extent[l] = r.side(l) * stride_[l];
    Accum total = 0;
    const int corners = 1 << dims_.rank();
    for (int mask = 0; mask < corners; ++mask) {
      Index t = base;
      for (int l = 0; l < dims_.rank(); ++l)
        if (mask & (1 << l)) t += extent[l];
      total += sign_[mask] * table_[t];
    }
    return total;
  }

  /// Sum over r times cell_measure. Throws std::domain_error out of bounds.
  Scalar rect_sum(const Rect& r) const {
    check(r);
    return static_cast<Scalar>(raw_sum(r) * static_cast<Accum>(cell_measure_));
  }

  /// Mean of the values over r.
  Scalar rect_average(const Rect& r) const {
    check(r);
    return static_cast<Scalar>(raw_sum(r) / static_cast<Accum>(r.cells()));
  }

 private:
  void check(const Rect& r) const {
    if (!r.within(dims_))
      throw std::domain_error("rectangle " + r.to_string() + " outside dims " +
                              dims_.to_string());
  }
  void corner_offsets() {
    const int n = dims_.rank();
    for (int mask = 0; mask < (1 << n); ++mask) {
      // Corner hi on every axis flagged in mask; parity of lo-corners sets sign.
      const int lows = n - __builtin_popcount(static_cast<unsigned>(mask));
      sign_[mask] = (lows % 2 == 0) ? 1 : -1;
    }
  }

  Dims dims_;
  Scalar cell_measure_ = Scalar(1);
  Point stride_{};
  std::vector<Accum> table_;
  std::array<int, (1 << kMaxDims)> sign_{};
};

template <typename Scalar>
PrefixSum<Scalar> build_prefix_sum(const GridFunction<Scalar>& g) {
  return PrefixSum<Scalar>(g);
}

template <typename Scalar>
Scalar rect_sum(const PrefixSum<Scalar>& ps, const Rect& r) {
  return ps.rect_sum(r);
}

template <typename Scalar>
Scalar rect_average(const PrefixSum<Scalar>& ps, const Rect& r) {
  return ps.rect_average(r);
}

}  // namespace strongmax
