#include "strongmax/young.hpp"

#include "text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace strongmax {

namespace {

// Absolute values of the cells and their maximum; throws on non-finite input.
double scan_cells(std::span<const double> cells) {
  if (cells.empty()) throw std::domain_error("Luxemburg norm over an empty set");
  double gmax = 0.0;
  for (double v : cells) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite value in Luxemburg norm");
    gmax = std::max(gmax, std::abs(v));
  }
  return gmax;
}

// mean Psi(u |g|) - 1; increasing and convex in u.
double excess(std::span<const double> cells, const YoungFunction& psi, double u) {
  double total = 0.0;
  for (double v : cells)
    if (v != 0.0) total += psi(u * std::abs(v));
  return total / static_cast<double>(cells.size()) - 1.0;
}

}  // namespace

double phi_n(int n, double t) {
  if (n < 1) throw ConfigError("phi_n needs n >= 1");
  if (n == 1 || t <= 1.0) return t;
  return t * (1.0 + std::pow(std::log(t), n - 1));
}

double phi_n_iterate(int n, int m, double t) {
  if (m < 1) throw ConfigError("phi_n_iterate needs m >= 1");
  for (int i = 0; i < m; ++i) t = phi_n(n, t);
  return t;
}

double phi_n_log_e(int n, double t) {
  if (n < 1) throw ConfigError("phi_n needs n >= 1");
  if (n == 1) return t;
  return t * std::pow(std::log(std::numbers::e + t), n - 1);
}

YoungFunction YoungFunction::identity() { return {Kind::Identity, 1.0}; }

YoungFunction YoungFunction::power(double p) {
  if (!(p > 1.0)) throw ConfigError("power Young function needs p > 1");
  return {Kind::Power, p};
}

YoungFunction YoungFunction::llogk(double k) {
  if (!(k >= 0.0)) throw ConfigError("llogk Young function needs k >= 0");
  return {Kind::LLogK, k};
}

YoungFunction YoungFunction::phi(int n) {
  if (n < 1) throw ConfigError("phi_n Young function needs n >= 1");
  return {Kind::PhiN, static_cast<double>(n)};
}

YoungFunction YoungFunction::complementary_of(const YoungFunction& base, double t_max) {
  if (!(t_max > 0.0)) throw ConfigError("complementary needs t_max > 0");
  YoungFunction out(Kind::Complementary, t_max);
  out.base_ = std::make_shared<const YoungFunction>(base);
  return out;
}

YoungFunction YoungFunction::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "identity" && arg.empty()) return identity();
  if (!arg.empty()) {
    if (head == "power") return power(text::parse_number(arg));
    if (head == "llogk") return llogk(text::parse_number(arg));
    if (head == "phi_n") {
      const double n = text::parse_number(arg);
      if (n != std::floor(n)) throw ConfigError("phi_n needs an integer n");
      return phi(static_cast<int>(n));
    }
  }
  throw ConfigError("unknown Young function '" + std::string(text) + "'");
}

std::string YoungFunction::name() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Power: return "power:" + text::format_number(param_);
    case Kind::LLogK: return "llogk:" + text::format_number(param_);
    case Kind::PhiN: return "phi_n:" + text::format_number(param_);
    case Kind::Complementary: return "complementary(" + base_->name() + ")";
  }
  return "?";
}

double YoungFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::Identity: return t;
    case Kind::Power: return std::pow(t, param_);
    case Kind::LLogK:
      if (param_ == 1.0) return t * std::log(std::numbers::e + t);
      return t * std::pow(std::log(std::numbers::e + t), param_);
    case Kind::PhiN: return phi_n(static_cast<int>(param_), t);
    case Kind::Complementary: return complementary(*base_, t, param_);
  }
  return t;
}

double complementary(const YoungFunction& psi, double s, double t_max) {
  if (!(t_max > 0.0)) throw ConfigError("complementary needs t_max > 0");
  if (!(s >= 0.0)) throw std::domain_error("complementary needs s >= 0");
  if (s == 0.0) return 0.0;
  const auto objective = [&](double t) { return s * t - psi(t); };
  constexpr double inv_phi = 0.6180339887498949;
  double a = 0.0;
  double b = t_max;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > 1e-13 * std::max(1.0, b)) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  const double best = std::max({fc, fd, objective(0.5 * (a + b)), objective(t_max), 0.0});
  return best;
}

double luxemburg_norm(std::span<const double> cells, const YoungFunction& psi, double tol) {
  if (!(tol > 0.0)) throw ConfigError("Luxemburg tolerance must be positive");
  const double gmax = scan_cells(cells);
  if (gmax == 0.0) return 0.0;

  // Bracket the root of F(u) = mean Psi(u|g|) - 1 with F(lo) <= 0 < F(hi).
  double lo = 1.0 / gmax;
  double flo = excess(cells, psi, lo);
  double hi = lo;
  double fhi = flo;
  if (flo <= 0.0) {
    do {
      lo = hi;
      flo = fhi;
      hi *= 2.0;
      fhi = excess(cells, psi, hi);
    } while (fhi <= 0.0);
  } else {
    do {
      hi = lo;
      fhi = flo;
      lo *= 0.5;
      flo = excess(cells, psi, lo);
    } while (flo > 0.0);
  }
  if (flo == 0.0) return 1.0 / lo;

  // Illinois iteration. Convexity of Psi gives u F'(u) >= F(u) + 1, so a
  // residual below tol/4 certifies the relative error of u.
  int side = 0;
  int slow_steps = 0;
  double width = hi - lo;
  for (int iter = 0; iter < 400; ++iter) {
    if (hi - lo <= 0.5 * tol * lo) break;
    double u = 0.5 * (lo + hi);
    if (slow_steps < 3 && std::isfinite(fhi)) {
      const double secant = lo - flo * (hi - lo) / (fhi - flo);
      if (secant > lo && secant < hi) u = secant;
    } else {
      slow_steps = 0;
    }
    const double fu = excess(cells, psi, u);
    if (std::abs(fu) <= 0.25 * tol) return 1.0 / u;
    if (fu > 0.0) {
      hi = u;
      fhi = fu;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = u;
      flo = fu;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
    const double next = hi - lo;
    slow_steps = next > 0.5 * width ? slow_steps + 1 : 0;
    width = next;
  }
  return 2.0 / (lo + hi);
}

double luxemburg_norm_bisection(std::span<const double> cells, const YoungFunction& psi,
                                double tol) {
  if (!(tol > 0.0)) throw ConfigError("Luxemburg tolerance must be positive");
  const double gmax = scan_cells(cells);
  if (gmax == 0.0) return 0.0;
  const auto mean_psi = [&](double lambda) {
    double total = 0.0;
    for (double v : cells) total += psi(std::abs(v) / lambda);
    return total / static_cast<double>(cells.size());
  };
  // Feasible set {lambda : mean_psi(lambda) <= 1} is [lambda*, inf).
  double hi = gmax;
  while (mean_psi(hi) > 1.0) hi *= 2.0;
  double lo = hi;
  while (mean_psi(lo) <= 1.0) lo *= 0.5;
  while (hi - lo > 0.5 * tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mean_psi(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "converges";
    case Verdict::Diverges: return "diverges";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

BStarReport check_bstar_p(const YoungFunction& psi, double p, int n, double c_lo,
                          double t_max) {
  if (!(p > 1.0)) throw ConfigError("B*_p check needs p > 1");
  if (!(c_lo > 0.0) || !(t_max > c_lo)) throw ConfigError("B*_p check needs 0 < c_lo < t_max");
  constexpr int kIntervals = 4000;
  const double s0 = std::log(c_lo);
  const double s1 = std::log(t_max);
  const double ds = (s1 - s0) / kIntervals;

  // In s = log t the measure dt/t is ds.
  std::vector<double> s(kIntervals + 1), g(kIntervals + 1);
  for (int i = 0; i <= kIntervals; ++i) {
    s[i] = s0 + ds * i;
    const double t = std::exp(s[i]);
    g[i] = phi_n_log_e(n, psi(t)) * std::exp(-p * s[i]);
  }
  BStarReport out;
  for (int i = 0; i < kIntervals; ++i) out.partial_integral += 0.5 * (g[i] + g[i + 1]) * ds;

  // Least-squares slope of log h against log t, h(t) = g(log t) / t.
  const int first = kIntervals - kIntervals / 4;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int i = first; i <= kIntervals; ++i) {
    if (!(g[i] > 0.0) || !std::isfinite(g[i])) continue;
    const double y = std::log(g[i]) - s[i];
    sx += s[i];
    sy += y;
    sxx += s[i] * s[i];
    sxy += s[i] * y;
    ++count;
  }
  if (count < 2) return out;
  out.tail_exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  if (out.tail_exponent < -1.0 - 0.05)
    out.verdict = Verdict::Converges;
  else if (out.tail_exponent > -1.0 + 0.05)
    out.verdict = Verdict::Diverges;
  return out;
}

HolderReport generalized_holder_check(const GridFunctiond& f, const GridFunctiond& g,
                                      const Rect& r, const YoungFunction& psi, double tol,
                                      double t_max) {
  if (!f.same_lattice(g)) throw std::domain_error("Hölder check needs grids on one lattice");
  if (!r.within(f.dims())) throw std::domain_error("rectangle outside dims");
  std::vector<double> fc, gc;
  double product = 0.0;
  for_each_point(r, [&](const Point& x) {
    fc.push_back(f(x));
    gc.push_back(g(x));
    product += std::abs(f(x) * g(x));
  });
  HolderReport out;
  out.numerator = product / static_cast<double>(fc.size());
  out.norm_f = luxemburg_norm(fc, psi, tol);
  out.norm_g = luxemburg_norm(gc, YoungFunction::complementary_of(psi, t_max), tol);
  const double denom = out.norm_f * out.norm_g;
  if (denom == 0.0) {
    out.violation = out.numerator != 0.0;
    out.ratio = out.violation ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    out.ratio = out.numerator / denom;
  }
  return out;
}

LadderReport check_young_ladder(const YoungFunction& psi) {
  // Relative slack for one or two roundings in the evaluation.
  constexpr double slack = 1e-14;
  const auto le = [](double a, double b) { return a <= b + slack * std::abs(b); };
  std::vector<double> t;
  for (int i = -20; i <= 20; ++i) t.push_back(std::ldexp(1.0, i));
  LadderReport out;
  out.zero_at_origin = psi(0.0) == 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (!le(psi(t[i]), psi(t[i + 1]))) ++out.monotonicity;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (!le(psi(0.5 * (t[i] + t[j])), 0.5 * (psi(t[i]) + psi(t[j])))) ++out.convexity;
  for (double eps : {0.1, 0.25, 0.5, 0.9})
    for (double x : t)
      if (!le(psi(eps * x), eps * psi(x))) ++out.scaling;
  return out;
}

}  // namespace strongmax
