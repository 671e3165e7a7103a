#pragma once

#include "strongmax/grid.hpp"
#include "strongmax/maximal.hpp"
#include "strongmax/prefix_sum.hpp"
#include "strongmax/rects.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace strongmax {

/// 1/p = sum_j 1/p_j.
inline double harmonic_exponent(std::span<const double> ps) {
  if (ps.empty()) throw ConfigError("need at least one exponent");
  double inv = 0.0;
  for (double p : ps) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("exponents must lie in [1, inf)");
    inv += 1.0 / p;
  }
  return 1.0 / inv;
}

/// nu = prod_j omega_j^{p/p_j}.
template <typename Scalar>
GridFunction<Scalar> nu_weight(const std::vector<GridFunction<Scalar>>& omegas,
                               std::span<const double> ps) {
  require_same_lattice<Scalar>(omegas);
  if (ps.size() != omegas.size()) throw ConfigError("need one exponent per weight");
  const double p = harmonic_exponent(ps);
  typename GridFunction<Scalar>::Values v =
      GridFunction<Scalar>::Values::Ones(omegas.front().size());
  for (std::size_t j = 0; j < omegas.size(); ++j)
    v *= omegas[j].values().pow(static_cast<Scalar>(p / ps[j]));
  return omegas.front().with_values(v);
}

/// A weight-class constant together with the rectangle attaining it.
struct WeightConstant {
  double value = 0.0;
  Rect argmax;
};

namespace detail {

template <typename Scalar>
void require_positive(const GridFunction<Scalar>& w) {
  w.validate();
  if (!(w.values() > Scalar(0)).all())
    throw std::domain_error("weight must be strictly positive");
}

}  // namespace detail

/// max_R <omega>_R <omega^{1-p'}>_R^{p/p'}, first maximiser in enumeration order.
template <typename Scalar>
WeightConstant ap_constant(const GridFunction<Scalar>& omega, double p,
                           const RectBasis& basis = RectBasis::all()) {
  if (!(p > 1.0)) throw ConfigError("A_p constant needs p > 1");
  detail::require_positive(omega);
  const double dual = p / (p - 1.0);
  const PrefixSum<Scalar> w(omega);
  const PrefixSum<Scalar> s(omega.with_values(omega.values().pow(Scalar(1.0 - dual))));
  WeightConstant best{-1.0, {}};
  for_each_rect(omega.dims(), basis, [&](const Rect& r) {
    const double cells = static_cast<double>(r.cells());
    const double avg_w = static_cast<double>(w.raw_sum(r)) / cells;
    const double avg_s = static_cast<double>(s.raw_sum(r)) / cells;
    const double v = avg_w * std::pow(avg_s, p / dual);
    if (v > best.value) best = {v, r};
  });
  return best;
}

/// max_x M_R omega(x) / omega(x), with the maximising point.
struct A1Constant {
  double value = 0.0;
  Point argmax{};
};

template <typename Scalar>
A1Constant a1_constant(const GridFunction<Scalar>& omega,
                       const RectBasis& basis = RectBasis::all(), Engine engine = Engine::Fast) {
  detail::require_positive(omega);
  MaximalRequest<Scalar> req;
  req.inputs = {omega};
  req.basis = basis;
  const auto m = evaluate(req, engine);
  A1Constant best{-1.0, {}};
  for (Index k = 0; k < omega.size(); ++k) {
    const double v = static_cast<double>(m[k]) / static_cast<double>(omega[k]);
    if (v > best.value) best = {v, omega.point(k)};
  }
  return best;
}

/// max_R <nu>_R prod_j <omega_j^{1-p_j'}>_R^{p/p_j'}. For p_j = 1 the factor
/// is (inf_R omega_j)^{-p}.
template <typename Scalar>
WeightConstant multilinear_ap_constant(const std::vector<GridFunction<Scalar>>& omegas,
                                       std::span<const double> ps,
                                       const RectBasis& basis = RectBasis::all()) {
  require_same_lattice<Scalar>(omegas);
  if (ps.size() != omegas.size()) throw ConfigError("need one exponent per weight");
  for (const auto& w : omegas) detail::require_positive(w);
  const double p = harmonic_exponent(ps);
  const PrefixSum<Scalar> nu(nu_weight(omegas, ps));
  std::vector<std::optional<PrefixSum<Scalar>>> duals(omegas.size());
  for (std::size_t j = 0; j < omegas.size(); ++j) {
    if (ps[j] > 1.0) {
      const double dual = ps[j] / (ps[j] - 1.0);
      duals[j].emplace(omegas[j].with_values(omegas[j].values().pow(Scalar(1.0 - dual))));
    }
  }
  WeightConstant best{-1.0, {}};
  for_each_rect(omegas.front().dims(), basis, [&](const Rect& r) {
    const double cells = static_cast<double>(r.cells());
    double v = static_cast<double>(nu.raw_sum(r)) / cells;
    for (std::size_t j = 0; j < omegas.size(); ++j) {
      if (duals[j]) {
        const double dual = ps[j] / (ps[j] - 1.0);
        v *= std::pow(static_cast<double>(duals[j]->raw_sum(r)) / cells, p / dual);
      } else {
        double inf = std::numeric_limits<double>::infinity();
        for_each_point(r, [&](const Point& x) {
          inf = std::min(inf, static_cast<double>(omegas[j](x)));
        });
        v *= std::pow(inf, -p);
      }
    }
    if (v > best.value) best = {v, r};
  });
  return best;
}

/// Outcome of the sampled Condition (A) search. c_hat is a lower bound on
/// the true c(lambda) since only the sampled sets are examined.
struct ConditionAEstimate {
  double c_hat = 0.0;
  std::vector<Rect> worst_set;  // union of these rectangles
  int evaluated = 0;
  int skipped = 0;              // sets with omega(E) = 0
};

struct ConditionAOptions {
  int max_union = 5;
  /// All single basis rectangles are added when their count is at most this.
  Index singles_limit = 5000;
  RectBasis basis = RectBasis::all();
};

/// Random set families of Condition (A): unions of up to max_union random
/// rectangles, plus every single rectangle on small grids. Depends only on
/// (dims, n_sets, seed, options), never on lambda.
std::vector<std::vector<Rect>> condition_a_sample_sets(const Dims& dims, int n_sets,
                                                       std::uint64_t seed,
                                                       const ConditionAOptions& options);

/// max over sampled E of omega({M_R chi_E > lambda}) / omega(E).
ConditionAEstimate condition_a_estimate(const GridFunctiond& omega, double lambda, int n_sets,
                                        std::uint64_t seed,
                                        const ConditionAOptions& options = {});

/// Deterministic weights on the unit cube [0,1)^n sampled at cell centres:
///   constant[:c], power:alpha (|x - x0|^alpha, x0 the lattice point nearest the
///   centre, alpha > -n), checkerboard[:contrast[:smooth]], lognormal:sigma
///   (exp(sigma Z) on a fixed 8-per-axis block lattice), delta-spike:h
///   (h on the centre cell, 0 elsewhere), zero-half[:v] (0 on x_1 < 1/2, v
///   elsewhere), box:a0:b0[:a1:b1...] (indicator of a continuum box),
///   random[:hi] (iid uniform [0, hi) per cell).
/// cell_measure is 1/prod N_l unless given.
GridFunctiond weight_catalog(const Dims& dims, std::string_view kind, std::uint64_t seed,
                             std::optional<double> cell_measure = std::nullopt);

}  // namespace strongmax
