#pragma once

#include "strongmax/grid.hpp"
#include "strongmax/parallel.hpp"
#include "strongmax/prefix_sum.hpp"
#include "strongmax/rects.hpp"
#include "strongmax/young.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace strongmax {

/// Inputs (f_1, ..., f_m), the rectangle family, and optional Young
/// functions (one per input) for the Orlicz variant.
template <typename Scalar>
struct MaximalRequest {
  std::vector<GridFunction<Scalar>> inputs;
  RectBasis basis = RectBasis::all();
  std::vector<YoungFunction> young;
  double tol = 1e-9;

  void validate() const {
    require_same_lattice<Scalar>(inputs);
    if (!young.empty() && young.size() != inputs.size())
      throw ConfigError("need one Young function per input");
    if (!young.empty() && !(tol > 0.0)) throw ConfigError("Luxemburg tolerance must be positive");
    basis.validate(inputs.front().dims());
  }
};

/// Fast path (prefix sums + separable window maxima) or the direct-loop oracle.
enum class Engine { Fast, BruteForce };

/// Rectangle count above which brute_force_maximal refuses to run.
inline constexpr Index kBruteForceRectLimit = 1'000'000;

namespace detail {

// out[x] = max in[k] over anchors k with k*stride <= x < k*stride + side.
template <typename Scalar>
void window_max_line(const Scalar* in, Index in_step, Index anchors, Scalar* out,
                     Index out_step, Index extent, Index side, Index stride,
                     std::vector<Index>& deque_buf) {
  if (stride == side) {
    for (Index x = 0; x < extent; ++x) {
      const Index k = x / side;
      out[x * out_step] =
          k < anchors ? in[k * in_step] : -std::numeric_limits<Scalar>::infinity();
    }
    return;
  }
  // stride 1: sliding maximum over anchors [x - side + 1, x], monotone deque.
  deque_buf.resize(static_cast<std::size_t>(anchors));
  Index head = 0, tail = 0;
  for (Index x = 0; x < extent; ++x) {
    if (x < anchors) {
      const Scalar v = in[x * in_step];
      while (tail > head && in[deque_buf[tail - 1] * in_step] <= v) --tail;
      deque_buf[tail++] = x;
    }
    while (tail > head && deque_buf[head] < x - side + 1) ++head;
    out[x * out_step] = in[deque_buf[head] * in_step];
  }
}

/// Pointwise max over basis rectangles R containing x of value(R).
///
/// Rectangles are grouped by side tuple; within a group the values sit on
/// an anchor lattice and the max over anchors covering x is separable, so it
/// is taken one axis at a time with a sliding window.
template <typename Scalar, typename ValueFn>
GridFunction<Scalar> sweep_rect_maximum(const Dims& dims, Scalar cell_measure,
                                        const RectBasis& basis, ValueFn&& value) {
  const auto tuples = side_tuples(dims, basis);
  const int n = dims.rank();
  const Index cells = dims.cells();
  constexpr Scalar lowest = -std::numeric_limits<Scalar>::infinity();

  auto partial = per_worker(std::vector<Scalar>(static_cast<std::size_t>(cells), lowest));
  parallel_chunks(tuples.size(), [&](int worker, std::size_t begin, std::size_t end) {
    std::vector<Scalar>& acc = partial[static_cast<std::size_t>(worker)];
    std::vector<Scalar> a(static_cast<std::size_t>(cells)), b(static_cast<std::size_t>(cells));
    std::vector<Index> deque_buf;
    for (std::size_t ti = begin; ti < end; ++ti) {
      const SideTuple& t = tuples[ti];
      Point shape{};
      for (int l = 0; l < n; ++l) shape[l] = (dims[l] - t.side[l]) / t.stride[l] + 1;

      // Values on the anchor lattice, row-major in `shape`.
      Rect r;
      r.rank = n;
      Point k{};
      Index flat = 0;
      while (true) {
        for (int l = 0; l < n; ++l) {
          r.lo[l] = k[l] * t.stride[l];
          r.hi[l] = r.lo[l] + t.side[l];
        }
        a[static_cast<std::size_t>(flat++)] = value(r);
        int l = n - 1;
        while (l >= 0) {
          if (++k[l] < shape[l]) break;
          k[l] = 0;
          --l;
        }
        if (l < 0) break;
      }

      // Axis by axis: replace the anchor index with the lattice coordinate.
      Scalar* src = a.data();
      Scalar* dst = b.data();
      for (int axis = 0; axis < n; ++axis) {
        Index inner = 1;
        for (int l = axis + 1; l < n; ++l) inner *= shape[l];
        Index outer = 1;
        for (int l = 0; l < axis; ++l) outer *= shape[l];
        const Index anchors = shape[axis];
        const Index extent = dims[axis];
        for (Index o = 0; o < outer; ++o)
          for (Index i = 0; i < inner; ++i)
            window_max_line(src + o * anchors * inner + i, inner, anchors,
                            dst + o * extent * inner + i, inner, extent, t.side[axis],
                            t.stride[axis], deque_buf);
        shape[axis] = extent;
        std::swap(src, dst);
      }
      for (Index c = 0; c < cells; ++c) acc[c] = std::max(acc[c], src[c]);
    }
  });

  GridFunction<Scalar> out(dims, cell_measure);
  for (Index c = 0; c < cells; ++c) {
    Scalar best = lowest;
    for (const auto& acc : partial) best = std::max(best, acc[static_cast<std::size_t>(c)]);
    // Every cell lies in some basis rectangle except under a basis with no
    // rectangle covering it; report 0 there.
    out[c] = best == lowest ? Scalar(0) : best;
  }
  return out;
}

template <typename Scalar>
void gather_cells(const GridFunction<Scalar>& g, const Rect& r, std::vector<double>& buf) {
  buf.clear();
  for_each_point(r, [&](const Point& x) { buf.push_back(static_cast<double>(g(x))); });
}

}  // namespace detail

/// Pointwise max over basis rectangles R containing x of prod_j avg_R |f_j|.
template <typename Scalar>
GridFunction<Scalar> multilinear_strong(std::span<const GridFunction<Scalar>> fs,
                                        const RectBasis& basis = RectBasis::all()) {
  require_same_lattice(fs);
  basis.validate(fs.front().dims());
  std::vector<PrefixSum<Scalar>> sums;
  sums.reserve(fs.size());
  for (const auto& f : fs) {
    f.validate();
    sums.emplace_back(f);
  }
  return detail::sweep_rect_maximum<Scalar>(
      fs.front().dims(), fs.front().cell_measure(), basis, [&](const Rect& r) {
        using Accum = accumulator_t<Scalar>;
        Accum product = 1;
        const Accum cells = static_cast<Accum>(r.cells());
        for (const auto& ps : sums) product *= ps.raw_sum(r) / cells;
        return static_cast<Scalar>(product);
      });
}

template <typename Scalar>
GridFunction<Scalar> multilinear_strong(const std::vector<GridFunction<Scalar>>& fs,
                                        const RectBasis& basis = RectBasis::all()) {
  return multilinear_strong(std::span<const GridFunction<Scalar>>(fs), basis);
}

/// M_R f for the chosen basis (all rectangles by default).
template <typename Scalar>
GridFunction<Scalar> strong_maximal(const GridFunction<Scalar>& f,
                                    const RectBasis& basis = RectBasis::all()) {
  return multilinear_strong(std::span<const GridFunction<Scalar>>(&f, 1), basis);
}

/// Hardy-Littlewood maximal function over cubes.
template <typename Scalar>
GridFunction<Scalar> hl_maximal(const GridFunction<Scalar>& f) {
  return strong_maximal(f, RectBasis::cubes());
}

/// Strong maximal function over rectangles with at most c distinct sides.
template <typename Scalar>
GridFunction<Scalar> complexity_maximal(const GridFunction<Scalar>& f, int c) {
  return strong_maximal(f, RectBasis::complexity(c));
}

template <typename Scalar>
GridFunction<Scalar> multilinear_complexity(const std::vector<GridFunction<Scalar>>& fs, int c) {
  return multilinear_strong(fs, RectBasis::complexity(c));
}

/// Pointwise max over R containing x of prod_j ||f_j||_{Psi_j, R}. Each
/// rectangle's norms are evaluated exactly once.
template <typename Scalar>
GridFunction<Scalar> multilinear_orlicz(const std::vector<GridFunction<Scalar>>& fs,
                                        const std::vector<YoungFunction>& psis,
                                        const RectBasis& basis = RectBasis::all(),
                                        double tol = 1e-9) {
  MaximalRequest<Scalar> req{fs, basis, psis, tol};
  req.validate();
  if (psis.empty()) throw ConfigError("multilinear_orlicz needs Young functions");
  for (const auto& f : fs) f.validate();
  const Index cells = fs.front().dims().cells();
  return detail::sweep_rect_maximum<Scalar>(
      fs.front().dims(), fs.front().cell_measure(), basis, [&](const Rect& r) {
        thread_local std::vector<double> buf;
        buf.reserve(static_cast<std::size_t>(cells));
        double product = 1.0;
        for (std::size_t j = 0; j < fs.size(); ++j) {
          detail::gather_cells(fs[j], r, buf);
          product *= luxemburg_norm(buf, psis[j], tol);
          if (product == 0.0) break;
        }
        return static_cast<Scalar>(product);
      });
}

/// The fast operator selected by a request.
template <typename Scalar>
GridFunction<Scalar> fast_maximal(const MaximalRequest<Scalar>& req) {
  req.validate();
  if (!req.young.empty()) return multilinear_orlicz(req.inputs, req.young, req.basis, req.tol);
  return multilinear_strong(req.inputs, req.basis);
}

/// Direct-loop oracle: enumerates basis rectangles, sums each by visiting its
/// cells (no prefix sums), and stamps the value on every cell it covers.
/// Orlicz norms use plain bisection. Refuses above kBruteForceRectLimit.
template <typename Scalar>
GridFunction<Scalar> brute_force_maximal(const MaximalRequest<Scalar>& req) {
  req.validate();
  const Dims& dims = req.inputs.front().dims();
  if (count_rects(dims, req.basis) > kBruteForceRectLimit)
    throw std::length_error("brute force refused: more than 1e6 rectangles for " +
                            dims.to_string());
  for (const auto& f : req.inputs) f.validate();
  GridFunction<Scalar> out(dims, req.inputs.front().cell_measure());
  std::vector<double> buf;
  for_each_rect(dims, req.basis, [&](const Rect& r) {
    double value = 1.0;
    for (std::size_t j = 0; j < req.inputs.size(); ++j) {
      const auto& f = req.inputs[j];
      if (req.young.empty()) {
        long double total = 0;
        for_each_point(r, [&](const Point& x) { total += std::abs(f(x)); });
        value *= static_cast<double>(total / static_cast<long double>(r.cells()));
      } else {
        detail::gather_cells(f, r, buf);
        value *= luxemburg_norm_bisection(buf, req.young[j], req.tol);
      }
    }
    const Scalar v = static_cast<Scalar>(value);
    for_each_point(r, [&](const Point& x) {
      if (out(x) < v) out(x) = v;
    });
  });
  return out;
}

template <typename Scalar>
GridFunction<Scalar> evaluate(const MaximalRequest<Scalar>& req, Engine engine) {
  return engine == Engine::Fast ? fast_maximal(req) : brute_force_maximal(req);
}

/// W = M_R M_R^{n-1} ... M_R^1 omega: complexity 1, 2, ..., n-1 applied in
/// increasing order, then the full strong maximal function. n = 1 is a single
/// Hardy-Littlewood step.
template <typename Scalar>
GridFunction<Scalar> iterated_weight(const GridFunction<Scalar>& omega,
                                     Engine engine = Engine::Fast) {
  const int n = omega.rank();
  const auto apply = [&](const GridFunction<Scalar>& g, const RectBasis& basis) {
    MaximalRequest<Scalar> req;
    req.inputs = {g};
    req.basis = basis;
    return evaluate(req, engine);
  };
  if (n == 1) return apply(omega, RectBasis::cubes());
  GridFunction<Scalar> w = omega;
  for (int c = 1; c <= n - 1; ++c) w = apply(w, RectBasis::complexity(c));
  return apply(w, RectBasis::all());
}

}  // namespace strongmax
