#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace strongmax {

/// Upper bound on lattice rank. Desk-scale work never needs more.
inline constexpr int kMaxDims = 4;

using Index = std::int64_t;
using Point = std::array<Index, kMaxDims>;

/// Raised for invalid parameters or settings (as opposed to bad data, which
/// raises std::domain_error).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Per-axis extents (N_1, ..., N_n) of a finite lattice.
class Dims {
 public:
  Dims() = default;
  Dims(std::initializer_list<Index> extents)
      : Dims(std::span<const Index>(extents.begin(), extents.size())) {}
  explicit Dims(std::span<const Index> extents) {
    if (extents.empty() || extents.size() > static_cast<std::size_t>(kMaxDims))
      throw ConfigError("dims rank must be in 1.." + std::to_string(kMaxDims));
    rank_ = static_cast<int>(extents.size());
    for (int l = 0; l < rank_; ++l) {
      if (extents[l] <= 0) throw ConfigError("dims must be positive");
      n_[l] = extents[l];
    }
  }

  int rank() const { return rank_; }
  Index operator[](int axis) const { return n_[axis]; }
  Index cells() const {
    Index total = 1;
    for (int l = 0; l < rank_; ++l) total *= n_[l];
    return total;
  }
  std::vector<Index> to_vector() const { return {n_.begin(), n_.begin() + rank_}; }
  std::string to_string() const {
    std::string s;
    for (int l = 0; l < rank_; ++l) s += (l ? "x" : "") + std::to_string(n_[l]);
    return s;
  }
  /// Parses "16x16" style extents.
  static Dims parse(std::string_view text);

  friend bool operator==(const Dims& a, const Dims& b) {
    if (a.rank_ != b.rank_) return false;
    for (int l = 0; l < a.rank_; ++l)
      if (a.n_[l] != b.n_[l]) return false;
    return true;
  }

 private:
  std::array<Index, kMaxDims> n_{};
  int rank_ = 0;
};

/// Axis-parallel half-open box prod_l [lo_l, hi_l).
struct Rect {
  int rank = 0;
  Point lo{};
  Point hi{};

  Rect() = default;
  Rect(std::initializer_list<std::pair<Index, Index>> sides) {
    if (sides.size() == 0 || sides.size() > static_cast<std::size_t>(kMaxDims))
      throw ConfigError("rect rank must be in 1..4");
    for (const auto& [a, b] : sides) {
      if (b <= a) throw std::domain_error("rect side must be nonempty");
      lo[rank] = a;
      hi[rank] = b;
      ++rank;
    }
  }

  Index side(int axis) const { return hi[axis] - lo[axis]; }
  Index cells() const {
    Index total = 1;
    for (int l = 0; l < rank; ++l) total *= side(l);
    return total;
  }
  Index longest_side() const {
    Index best = 0;
    for (int l = 0; l < rank; ++l) best = std::max(best, side(l));
    return best;
  }
  bool contains(const Point& x) const {
    for (int l = 0; l < rank; ++l)
      if (x[l] < lo[l] || x[l] >= hi[l]) return false;
    return true;
  }
  bool within(const Dims& dims) const {
    if (rank != dims.rank()) return false;
    for (int l = 0; l < rank; ++l)
      if (lo[l] < 0 || hi[l] > dims[l] || lo[l] >= hi[l]) return false;
    return true;
  }
  std::string to_string() const {
    std::string s;
    for (int l = 0; l < rank; ++l)
      s += (l ? "x" : "") + std::string("[") + std::to_string(lo[l]) + "," +
           std::to_string(hi[l]) + ")";
    return s;
  }

  friend bool operator==(const Rect& a, const Rect& b) {
    if (a.rank != b.rank) return false;
    for (int l = 0; l < a.rank; ++l)
      if (a.lo[l] != b.lo[l] || a.hi[l] != b.hi[l]) return false;
    return true;
  }
};

/// The whole lattice as a rectangle.
inline Rect full_rect(const Dims& dims) {
  Rect r;
  r.rank = dims.rank();
  for (int l = 0; l < r.rank; ++l) r.hi[l] = dims[l];
  return r;
}

/// Number of lattice cells in a intersect b (0 when disjoint).
inline Index overlap_cells(const Rect& a, const Rect& b) {
  Index total = 1;
  for (int l = 0; l < a.rank; ++l) {
    const Index lo = std::max(a.lo[l], b.lo[l]);
    const Index hi = std::min(a.hi[l], b.hi[l]);
    if (hi <= lo) return 0;
    total *= hi - lo;
  }
  return total;
}

/// Which rectangle family a supremum ranges over.
struct RectBasis {
  enum class Kind { AllRects, Dyadic, Complexity, Cubes };

  Kind kind = Kind::AllRects;
  int c = 0;  // only meaningful for Complexity

  static RectBasis all() { return {Kind::AllRects, 0}; }
  static RectBasis dyadic() { return {Kind::Dyadic, 0}; }
  static RectBasis cubes() { return {Kind::Cubes, 0}; }
  static RectBasis complexity(int c) {
    if (c < 1) throw ConfigError("complexity c must be >= 1");
    return {Kind::Complexity, c};
  }

  /// "all", "dyadic", "cubes", "complexity:c".
  static RectBasis parse(std::string_view text);
  std::string name() const;

  /// Checks the basis against a lattice; throws ConfigError when unusable.
  void validate(const Dims& dims) const;

  /// Membership of a single in-domain rectangle.
  bool admits(const Rect& r) const;

  friend bool operator==(const RectBasis& a, const RectBasis& b) {
    return a.kind == b.kind && a.c == b.c;
  }
};

/// Nonnegative values on a lattice, row-major (last axis fastest), with the
/// measure of one cell. Lebesgue measure of a set = cell count * cell_measure.
template <typename Scalar>
class GridFunction {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  GridFunction() = default;
  explicit GridFunction(const Dims& dims, Scalar cell_measure = Scalar(1))
      : dims_(dims), values_(Values::Zero(dims.cells())), cell_measure_(cell_measure) {
    init_strides();
    check_measure();
  }
  GridFunction(const Dims& dims, Values values, Scalar cell_measure = Scalar(1))
      : dims_(dims), values_(std::move(values)), cell_measure_(cell_measure) {
    init_strides();
    check_measure();
    if (values_.size() != dims_.cells())
      throw std::domain_error("grid value count " + std::to_string(values_.size()) +
                              " does not match dims " + dims_.to_string());
    validate();
  }

  static GridFunction constant(const Dims& dims, Scalar c, Scalar cell_measure = Scalar(1)) {
    return GridFunction(dims, Values::Constant(dims.cells(), c), cell_measure);
  }

  const Dims& dims() const { return dims_; }
  int rank() const { return dims_.rank(); }
  Index size() const { return static_cast<Index>(values_.size()); }
  Scalar cell_measure() const { return cell_measure_; }

  const Values& values() const { return values_; }
  /// Mutable access; callers restoring invariants may call validate().
  Values& values() { return values_; }

  Index flat_index(const Point& x) const {
    Index k = 0;
    for (int l = 0; l < rank(); ++l) k += x[l] * stride_[l];
    return k;
  }
  Point point(Index flat) const {
    Point x{};
    for (int l = 0; l < rank(); ++l) {
      x[l] = flat / stride_[l];
      flat -= x[l] * stride_[l];
    }
    return x;
  }
  Index stride(int axis) const { return stride_[axis]; }

  Scalar operator()(const Point& x) const { return values_[flat_index(x)]; }
  Scalar& operator()(const Point& x) { return values_[flat_index(x)]; }
  Scalar operator[](Index flat) const { return values_[flat]; }
  Scalar& operator[](Index flat) { return values_[flat]; }

  /// Throws std::domain_error unless every value is finite and >= 0.
  void validate() const {
    for (Index k = 0; k < size(); ++k) {
      const Scalar v = values_[k];
      if (!std::isfinite(static_cast<double>(v)) || v < Scalar(0))
        throw std::domain_error("grid value at flat index " + std::to_string(k) +
                                " is negative or non-finite");
    }
  }

  /// A grid on the same lattice and cell measure with new values.
  template <typename Derived>
  GridFunction with_values(const Eigen::ArrayBase<Derived>& expr) const {
    return GridFunction(dims_, Values(expr), cell_measure_);
  }

  /// Sum of values times cell measure.
  Scalar integral() const { return values_.sum() * cell_measure_; }

  bool same_lattice(const GridFunction& other) const {
    return dims_ == other.dims_ && cell_measure_ == other.cell_measure_;
  }

 private:
  void init_strides() {
    Index s = 1;
    for (int l = rank() - 1; l >= 0; --l) {
      stride_[l] = s;
      s *= dims_[l];
    }
  }
  void check_measure() const {
    if (!(cell_measure_ > Scalar(0)) || !std::isfinite(static_cast<double>(cell_measure_)))
      throw std::domain_error("cell_measure must be positive and finite");
  }

  Dims dims_;
  Values values_;
  Scalar cell_measure_ = Scalar(1);
  Point stride_{};
};

using GridFunctiond = GridFunction<double>;

/// Throws std::domain_error unless all grids share dims and cell measure.
template <typename Scalar>
void require_same_lattice(std::span<const GridFunction<Scalar>> grids) {
  if (grids.empty()) throw ConfigError("at least one input grid is required");
  for (const auto& g : grids)
    if (!g.same_lattice(grids.front()))
      throw std::domain_error("input grids must share dims and cell_measure");
}

/// Odometer over the lattice points of a box in row-major order.
template <typename F>
void for_each_point(const Rect& box, F&& fn) {
  Point x = box.lo;
  const int n = box.rank;
  while (true) {
    fn(x);
    int l = n - 1;
    while (l >= 0) {
      if (++x[l] < box.hi[l]) break;
      x[l] = box.lo[l];
      --l;
    }
    if (l < 0) return;
  }
}

}  // namespace strongmax
