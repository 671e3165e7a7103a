#include "strongmax/weights.hpp"

#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace strongmax {

namespace {

// Uniform interval [lo, hi) with 0 <= lo < hi <= extent.
std::pair<Index, Index> random_interval(Index extent, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> cut(0, extent);
  Index a = cut(rng);
  Index b = cut(rng);
  while (a == b) b = cut(rng);
  return {std::min(a, b), std::max(a, b)};
}

Rect random_rect(const Dims& dims, std::mt19937_64& rng) {
  Rect r;
  r.rank = dims.rank();
  for (int l = 0; l < dims.rank(); ++l) {
    const auto [lo, hi] = random_interval(dims[l], rng);
    r.lo[l] = lo;
    r.hi[l] = hi;
  }
  return r;
}

// Continuum coordinate of the centre of cell i on an axis of n cells.
double centre(Index i, Index n) { return (static_cast<double>(i) + 0.5) / static_cast<double>(n); }

double arg_or(const std::vector<std::string_view>& parts, std::size_t k, double fallback) {
  return parts.size() > k ? text::parse_number(parts[k]) : fallback;
}

}  // namespace

std::vector<std::vector<Rect>> condition_a_sample_sets(const Dims& dims, int n_sets,
                                                       std::uint64_t seed,
                                                       const ConditionAOptions& options) {
  if (n_sets < 0) throw ConfigError("n_sets must be non-negative");
  if (options.max_union < 1) throw ConfigError("max_union must be at least 1");
  options.basis.validate(dims);
  std::vector<std::vector<Rect>> sets;
  if (count_rects(dims, options.basis) <= options.singles_limit)
    for_each_rect(dims, options.basis, [&](const Rect& r) { sets.push_back({r}); });
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pieces(1, options.max_union);
  for (int s = 0; s < n_sets; ++s) {
    std::vector<Rect> set(static_cast<std::size_t>(pieces(rng)));
    for (auto& r : set) r = random_rect(dims, rng);
    sets.push_back(std::move(set));
  }
  return sets;
}

ConditionAEstimate condition_a_estimate(const GridFunctiond& omega, double lambda, int n_sets,
                                        std::uint64_t seed, const ConditionAOptions& options) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("Condition (A) needs 0 < lambda < 1");
  omega.validate();
  if (!(omega.values() > 0.0).any()) throw std::domain_error("weight vanishes identically");
  const auto sets = condition_a_sample_sets(omega.dims(), n_sets, seed, options);

  ConditionAEstimate est;
  GridFunctiond chi(omega.dims(), omega.cell_measure());
  for (const auto& set : sets) {
    chi.values().setZero();
    for (const Rect& r : set) for_each_point(r, [&](const Point& x) { chi(x) = 1.0; });
    const double mass_e = (chi.values() * omega.values()).sum();
    if (mass_e == 0.0) {
      ++est.skipped;
      continue;
    }
    const auto m = strong_maximal(chi, options.basis);
    const double mass_level = (m.values() > lambda).select(omega.values(), 0.0).sum();
    const double ratio = mass_level / mass_e;
    ++est.evaluated;
    if (ratio > est.c_hat || est.worst_set.empty()) {
      est.c_hat = ratio;
      est.worst_set = set;
    }
  }
  return est;
}

GridFunctiond weight_catalog(const Dims& dims, std::string_view kind, std::uint64_t seed,
                             std::optional<double> cell_measure) {
  const double cm = cell_measure.value_or(1.0 / static_cast<double>(dims.cells()));
  const auto parts = text::split(kind, ':');
  const std::string_view head = parts.front();
  const int n = dims.rank();
  GridFunctiond w(dims, cm);

  // Fills w from a function of the cell's lattice point.
  const auto fill = [&](auto&& value) {
    for (Index k = 0; k < w.size(); ++k) w[k] = value(w.point(k));
  };

  if (head == "constant") {
    w.values().setConstant(arg_or(parts, 1, 1.0));
  } else if (head == "power" && parts.size() == 2) {
    const double alpha = text::parse_number(parts[1]);
    if (!(alpha > -n)) throw ConfigError("power weight needs alpha > -n");
    fill([&](const Point& x) {
      double r2 = 0.0;
      for (int l = 0; l < n; ++l) {
        const double x0 = static_cast<double>(dims[l] / 2) / static_cast<double>(dims[l]);
        const double d = centre(x[l], dims[l]) - x0;
        r2 += d * d;
      }
      return std::pow(std::sqrt(r2), alpha);
    });
  } else if (head == "checkerboard" && parts.size() <= 3) {
    const double contrast = arg_or(parts, 1, 4.0);
    if (!(contrast > 0.0)) throw ConfigError("checkerboard contrast must be positive");
    const bool smooth = parts.size() == 3 && parts[2] == "smooth";
    if (parts.size() == 3 && !smooth) throw ConfigError("unknown checkerboard mode");
    fill([&](const Point& x) {
      if (smooth) {
        double prod = 1.0;
        for (int l = 0; l < n; ++l)
          prod *= std::sin(2.0 * std::numbers::pi * 2.0 * centre(x[l], dims[l]));
        return 1.0 + (contrast - 1.0) * (1.0 + prod) / 2.0;
      }
      Index parity = 0;
      for (int l = 0; l < n; ++l) parity += static_cast<Index>(4.0 * centre(x[l], dims[l]));
      return parity % 2 == 0 ? contrast : 1.0;
    });
  } else if (head == "lognormal" && parts.size() == 2) {
    const double sigma = text::parse_number(parts[1]);
    constexpr Index blocks = 8;
    Index total = 1;
    for (int l = 0; l < n; ++l) total *= blocks;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> field(static_cast<std::size_t>(total));
    for (auto& v : field) v = std::exp(sigma * z(rng));
    fill([&](const Point& x) {
      Index b = 0;
      for (int l = 0; l < n; ++l)
        b = b * blocks + static_cast<Index>(blocks * centre(x[l], dims[l]));
      return field[static_cast<std::size_t>(b)];
    });
  } else if (head == "delta-spike" && parts.size() == 2) {
    const double h = text::parse_number(parts[1]);
    Point c{};
    for (int l = 0; l < n; ++l) c[l] = dims[l] / 2;
    w(c) = h;
  } else if (head == "zero-half" && parts.size() <= 2) {
    const double v = arg_or(parts, 1, 1.0);
    fill([&](const Point& x) { return centre(x[0], dims[0]) < 0.5 ? 0.0 : v; });
  } else if (head == "box" && parts.size() == 1 + 2 * static_cast<std::size_t>(n)) {
    std::vector<double> bounds;
    for (std::size_t k = 1; k < parts.size(); ++k) bounds.push_back(text::parse_number(parts[k]));
    fill([&](const Point& x) {
      for (int l = 0; l < n; ++l) {
        const double c = centre(x[l], dims[l]);
        if (c < bounds[2 * l] || c >= bounds[2 * l + 1]) return 0.0;
      }
      return 1.0;
    });
  } else if (head == "random" && parts.size() <= 2) {
    const double hi = arg_or(parts, 1, 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, hi);
    for (Index k = 0; k < w.size(); ++k) w[k] = u(rng);
  } else {
    throw ConfigError("unknown weight '" + std::string(kind) + "'");
  }
  w.validate();
  return w;
}

}  // namespace strongmax
