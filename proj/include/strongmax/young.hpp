#pragma once

#include "strongmax/grid.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace strongmax {

/// t [1 + (log+ t)^(n-1)]; the identity for n = 1.
double phi_n(int n, double t);

/// phi_n composed with itself m times.
double phi_n_iterate(int n, int m, double t);

/// t [log(e + t)]^(n-1), the variant used by the B*_p integrability test.
double phi_n_log_e(int n, double t);

/// A convex increasing map on [0, inf) with Phi(0) = 0.
///
/// Named forms are identity (t), power:p (t^p, p > 1), llogk:k
/// (t [log(e + t)]^k) and phi_n:n. The complementary function
/// sup_{0 <= t <= t_max} (s t - Phi(t)) is available as its own
/// YoungFunction and is evaluated numerically on demand.
class YoungFunction {
 public:
  enum class Kind { Identity, Power, LLogK, PhiN, Complementary };

  static YoungFunction identity();
  static YoungFunction power(double p);
  static YoungFunction llogk(double k);
  static YoungFunction phi(int n);
  static YoungFunction complementary_of(const YoungFunction& base, double t_max);

  /// Parses "identity", "power:p", "llogk:k", "phi_n:n".
  static YoungFunction parse(std::string_view text);

  double operator()(double t) const;

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  std::string name() const;

 private:
  YoungFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_ = Kind::Identity;
  double param_ = 0.0;
  std::shared_ptr<const YoungFunction> base_;  // Complementary only
};

/// Numeric complementary value sup over t in [0, t_max] of (s t - Psi(t)),
/// by golden-section search on the concave objective. When the true maximiser
/// lies beyond t_max the result is a lower bound of the untruncated supremum.
double complementary(const YoungFunction& psi, double s, double t_max);

/// Luxemburg norm inf{lambda > 0 : mean Psi(|g|/lambda) <= 1} of the listed
/// cell values, to relative tolerance tol. Bracketed Illinois iteration in
/// u = 1/lambda; the bracket is kept throughout. Returns 0 for g == 0.
double luxemburg_norm(std::span<const double> cells, const YoungFunction& psi, double tol);

/// Same quantity by plain bisection; the reference solver for oracles.
double luxemburg_norm_bisection(std::span<const double> cells, const YoungFunction& psi,
                                double tol);

/// Luxemburg norm of g restricted to r.
template <typename Scalar>
Scalar luxemburg_norm(const GridFunction<Scalar>& g, const Rect& r, const YoungFunction& psi,
                      double tol) {
  if (!r.within(g.dims()))
    throw std::domain_error("rectangle " + r.to_string() + " outside dims");
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(r.cells()));
  for_each_point(r, [&](const Point& x) { cells.push_back(static_cast<double>(g(x))); });
  return static_cast<Scalar>(luxemburg_norm(cells, psi, tol));
}

/// Three-way outcome of the strong B*_p integrability diagnostic.
enum class Verdict { Converges, Diverges, Inconclusive };
std::string to_string(Verdict v);

struct BStarReport {
  Verdict verdict = Verdict::Inconclusive;
  double partial_integral = 0.0;
  double tail_exponent = 0.0;
};

/// Integrates phi_n_log_e(n, Psi(t)) / t^p dt/t over [c_lo, t_max] with a
/// log-spaced trapezoid rule and fits the integrand's power law on the top
/// quarter of the log range. Exponent < -1.05 converges, > -0.95 diverges.
BStarReport check_bstar_p(const YoungFunction& psi, double p, int n, double c_lo, double t_max);

struct HolderReport {
  double numerator = 0.0;   // mean |f g| over r
  double norm_f = 0.0;      // ||f||_{Psi, r}
  double norm_g = 0.0;      // ||g||_{complementary Psi, r}
  double ratio = 0.0;
  bool violation = false;   // zero denominator with a nonzero numerator
};

/// mean_r |f g| / (||f||_{Psi,r} ||g||_{bar Psi,r}); the inequality asserts
/// ratio <= 2.
HolderReport generalized_holder_check(const GridFunctiond& f, const GridFunctiond& g,
                                      const Rect& r, const YoungFunction& psi, double tol,
                                      double t_max = 1e8);

/// Violation counts of the sampled Young-function axioms on the ladder
/// t = 2^-20 .. 2^20: monotonicity, midpoint convexity and
/// Phi(eps t) <= eps Phi(t) for eps in {1/10, 1/4, 1/2, 9/10}.
struct LadderReport {
  int monotonicity = 0;
  int convexity = 0;
  int scaling = 0;
  bool zero_at_origin = true;
  int total() const { return monotonicity + convexity + scaling + (zero_at_origin ? 0 : 1); }
};
LadderReport check_young_ladder(const YoungFunction& psi);

}  // namespace strongmax
