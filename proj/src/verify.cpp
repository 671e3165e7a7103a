#include "strongmax/verify.hpp"

#include "strongmax/io.hpp"
#include "strongmax/weights.hpp"

#include "text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace strongmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridFunctiond maximal(const std::vector<GridFunctiond>& fs, const RectBasis& basis,
                      const VerifyOptions& opt, const std::vector<YoungFunction>& psis = {}) {
  MaximalRequest<double> req{fs, basis, psis, opt.tol};
  return evaluate(req, opt.engine);
}

// sum_x w(x) * cell_measure over {m > threshold}.
double level_mass(const GridFunctiond& m, double threshold, const GridFunctiond* w) {
  double total = 0.0;
  for (Index k = 0; k < m.size(); ++k)
    if (m[k] > threshold) total += w ? (*w)[k] : 1.0;
  return total * m.cell_measure();
}

std::vector<Index> first_point_above(const GridFunctiond& m, double threshold) {
  for (Index k = 0; k < m.size(); ++k) {
    if (m[k] > threshold) {
      const Point x = m.point(k);
      return {x.begin(), x.begin() + m.rank()};
    }
  }
  return {};
}

// ||f||_{L^q(w)}^q = sum |f|^q w cell_measure.
double weighted_power_sum(const GridFunctiond& f, double q, const GridFunctiond& w) {
  return (f.values().abs().pow(q) * w.values()).sum() * f.cell_measure();
}

double ratio_of(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? kInf : 0.0;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_exponents(const std::vector<double>& ps, std::size_t m) {
  require(ps.size() == m, "need one exponent per function");
  for (double p : ps) require(p > 1.0 && std::isfinite(p), "exponents must satisfy 1 < p < inf");
}

void require_lattice(const VerificationCase& c) {
  std::vector<GridFunctiond> all = c.fs;
  all.insert(all.end(), c.omegas.begin(), c.omegas.end());
  require_same_lattice<double>(all);
}

// Completes a report whose rows have been filled in.
void finish_levels(RatioReport& rep) {
  rep.degenerate = true;
  rep.ratio = 0.0;
  bool first = true;
  for (const auto& row : rep.rows) {
    if (row.rhs > 0.0 || row.lhs > 0.0) rep.degenerate = false;
    if (row.rhs == 0.0 && row.lhs > 0.0) rep.violation = true;
    if (first || row.ratio > rep.ratio) {
      rep.ratio = row.ratio;
      rep.lhs = row.lhs;
      rep.rhs = row.rhs;
      first = false;
    }
  }
}

void finish_single(RatioReport& rep, double lhs, double rhs) {
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.ratio = ratio_of(lhs, rhs);
  rep.degenerate = lhs == 0.0 && rhs == 0.0;
  rep.violation = rhs == 0.0 && lhs > 0.0;
}

// Per-level sweep over thresholds s; `level` maps s to the reported t.
void sweep(RatioReport& rep, const GridFunctiond& m, const std::vector<double>& thresholds,
           const std::function<double(double)>& level,
           const std::function<double(double)>& lhs_at,
           const std::function<double(double)>& rhs_at) {
  for (double s : thresholds) {
    LevelRow row;
    row.level = level(s);
    row.lhs = lhs_at(s);
    row.rhs = rhs_at(s);
    row.ratio = ratio_of(row.lhs, row.rhs);
    if (row.rhs == 0.0 && row.lhs > 0.0 && rep.witness.empty())
      rep.witness = first_point_above(m, s);
    rep.rows.push_back(row);
  }
  finish_levels(rep);
}

// Thresholds for a level set {m > t^power}: given t levels, or the default
// ladder on the values of m.
std::vector<double> thresholds_for(const VerificationCase& c, const GridFunctiond& m, int power) {
  if (c.levels.empty()) return default_levels(m.values().maxCoeff());
  std::vector<double> out;
  for (double t : c.levels) {
    require(t > 0.0, "levels must be positive");
    out.push_back(std::pow(t, power));
  }
  return out;
}

template <typename F>
RatioReport timed(const std::string& theorem, const VerificationCase& c, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  RatioReport rep;
  rep.label = c.label;
  rep.theorem = theorem;
  body(rep);
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string csv_number(double v) {
  if (std::isfinite(v)) return text::format_number(v);
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

std::vector<double> default_levels(double top) {
  if (!(top > 0.0) || !std::isfinite(top)) return {};
  constexpr int kLevels = 12;
  std::vector<double> out;
  for (int i = 0; i < kLevels; ++i)
    out.push_back(i == kLevels - 1 ? top : top * std::pow(10.0, -3.0 * (kLevels - 1 - i) / (kLevels - 1)));
  return out;
}

RatioReport verify_tm1(const VerificationCase& c, const VerifyOptions& opt) {
  return timed("tm1", c, [&](RatioReport& rep) {
    const std::size_t m = c.fs.size();
    require(m > 0, "tm1 needs functions");
    require(c.omegas.size() == m && c.psis.size() == m, "tm1 needs one weight and Young function per function");
    require_exponents(c.ps, m);
    require_lattice(c);
    const double p = harmonic_exponent(c.ps);
    const auto nu = nu_weight(c.omegas, c.ps);

    rep.in_hypothesis = false;
    try {
      for (double q : {2.0, 4.0, 8.0}) {
        if (std::isfinite(ap_constant(nu, q).value)) {
          rep.in_hypothesis = true;
          break;
        }
      }
    } catch (const std::domain_error&) {
    }
    if (!rep.in_hypothesis) rep.warnings.push_back("nu has no finite A_p constant for p in {2,4,8}");
    for (std::size_t j = 0; j < m; ++j) {
      const auto b = check_bstar_p(c.psis[j], c.ps[j], c.fs[j].rank(), 1.0, 1e6);
      if (b.verdict != Verdict::Converges)
        rep.warnings.push_back(c.psis[j].name() + ": B*_p diagnostic " + to_string(b.verdict));
    }

    const auto mpsi = maximal(c.fs, RectBasis::all(), opt, c.psis);
    const double lhs = (mpsi.values().pow(p) * nu.values()).sum() * nu.cell_measure();
    double rhs = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto mw = maximal({c.omegas[j]}, RectBasis::all(), opt);
      rhs *= std::pow(weighted_power_sum(c.fs[j], c.ps[j], mw), p / c.ps[j]);
    }
    finish_single(rep, lhs, rhs);
  });
}

RatioReport verify_tm2(const VerificationCase& c, const VerifyOptions& opt) {
  return timed("tm2", c, [&](RatioReport& rep) {
    const std::size_t m = c.fs.size();
    require(m > 0, "tm2 needs functions");
    require(c.omegas.size() == m, "tm2 needs one weight per function");
    require_exponents(c.ps, m);
    require_lattice(c);
    const double p = harmonic_exponent(c.ps);
    const auto nu = nu_weight(c.omegas, c.ps);
    const auto mf = maximal(c.fs, RectBasis::all(), opt);
    double norms = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto w = iterated_weight(c.omegas[j], opt.engine);
      norms *= std::pow(weighted_power_sum(c.fs[j], c.ps[j], w), 1.0 / c.ps[j]);
    }
    const double md = static_cast<double>(m);
    sweep(
        rep, mf, thresholds_for(c, mf, static_cast<int>(m)),
        [&](double s) { return std::pow(s, 1.0 / md); },
        [&](double s) { return std::pow(level_mass(mf, s, &nu), 1.0 / p); },
        [&](double s) { return norms / s; });
  });
}

RatioReport verify_corollary(const VerificationCase& c, const VerifyOptions& opt) {
  return timed("cor", c, [&](RatioReport& rep) {
    const std::size_t m = c.fs.size();
    require(m > 0, "cor needs functions");
    require(c.omegas.size() == m, "cor needs one weight per function");
    require_exponents(c.ps, m);
    require_lattice(c);
    const double p = harmonic_exponent(c.ps);
    const auto nu = nu_weight(c.omegas, c.ps);
    const auto mf = maximal(c.fs, RectBasis::all(), opt);
    const double lhs = (mf.values().pow(p) * nu.values()).sum() * nu.cell_measure();
    double rhs = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto w = iterated_weight(c.omegas[j], opt.engine);
      rhs *= std::pow(weighted_power_sum(c.fs[j], c.ps[j], w), p / c.ps[j]);
    }
    finish_single(rep, lhs, rhs);
  });
}

RatioReport verify_endpoint_jmz(const VerificationCase& c, const VerifyOptions& opt) {
  return timed("jmz", c, [&](RatioReport& rep) {
    require(!c.fs.empty(), "jmz needs a function");
    const auto& f = c.fs.front();
    const int n = f.rank();
    const auto mf = maximal({f}, RectBasis::all(), opt);
    sweep(
        rep, mf, thresholds_for(c, mf, 1), [](double s) { return s; },
        [&](double s) { return level_mass(mf, s, nullptr); },
        [&](double s) {
          return f.values().abs().unaryExpr([&](double v) { return phi_n(n, v / s); }).sum() *
                 f.cell_measure();
        });
  });
}

RatioReport verify_endpoint_weighted(const VerificationCase& c, const VerifyOptions& opt) {
  return timed("weighted-jmz", c, [&](RatioReport& rep) {
    require(!c.fs.empty() && !c.omegas.empty(), "weighted-jmz needs a function and a weight");
    require_lattice(c);
    const auto& f = c.fs.front();
    const auto& w = c.omegas.front();
    const int n = f.rank();
    const auto mf = maximal({f}, RectBasis::all(), opt);
    const auto mw = maximal({w}, RectBasis::all(), opt);
    sweep(
        rep, mf, thresholds_for(c, mf, 1), [](double s) { return s; },
        [&](double s) { return level_mass(mf, s, &w); },
        [&](double s) {
          return (f.values().abs().unaryExpr([&](double v) { return phi_n(n, v / s); }) *
                  mw.values())
                     .sum() *
                 f.cell_measure();
        });
  });
}

RatioReport verify_saito_tanaka(const VerificationCase& c, const VerifyOptions& opt) {
  return timed("saito-tanaka", c, [&](RatioReport& rep) {
    require(!c.fs.empty() && !c.omegas.empty(), "saito-tanaka needs a function and a weight");
    require_lattice(c);
    const auto& f = c.fs.front();
    const auto& w = c.omegas.front();
    require(f.rank() == 2, "saito-tanaka is stated for n = 2");
    const auto mf = maximal({f}, RectBasis::all(), opt);
    const auto big_w = maximal({maximal({w}, RectBasis::cubes(), opt)}, RectBasis::all(), opt);
    sweep(
        rep, mf, thresholds_for(c, mf, 1), [](double s) { return s; },
        [&](double s) { return level_mass(mf, s, &w); },
        [&](double s) {
          return (f.values().abs().unaryExpr([&](double v) { return phi_n(2, v / s); }) *
                  big_w.values())
                     .sum() *
                 f.cell_measure();
        });
  });
}

RatioReport verify_theorem_a(const VerificationCase& c, const VerifyOptions& opt) {
  return timed("thm-a", c, [&](RatioReport& rep) {
    require(!c.fs.empty() && !c.omegas.empty(), "thm-a needs a function and a weight");
    require(!c.ps.empty() && c.ps.front() > 1.0 && std::isfinite(c.ps.front()),
            "thm-a needs an exponent 1 < p < inf");
    require_lattice(c);
    const auto& f = c.fs.front();
    const auto& w = c.omegas.front();
    const double p = c.ps.front();
    const auto mf = maximal({f}, RectBasis::all(), opt);
    const double norm = std::pow(weighted_power_sum(f, p, iterated_weight(w, opt.engine)), 1.0 / p);
    sweep(
        rep, mf, thresholds_for(c, mf, 1), [](double s) { return s; },
        [&](double s) { return std::pow(level_mass(mf, s, &w), 1.0 / p); },
        [&](double s) { return norm / s; });
  });
}

RatioReport verify_endpoint_multilinear(const VerificationCase& c, const VerifyOptions& opt) {
  return timed("endpoint-m", c, [&](RatioReport& rep) {
    const std::size_t m = c.fs.size();
    require(m > 0, "endpoint-m needs functions");
    require_lattice(c);
    const int n = c.fs.front().rank();
    const int mi = static_cast<int>(m);
    const double md = static_cast<double>(m);
    const auto mf = maximal(c.fs, RectBasis::all(), opt);
    sweep(
        rep, mf, thresholds_for(c, mf, mi), [&](double s) { return std::pow(s, 1.0 / md); },
        [&](double s) { return level_mass(mf, s, nullptr); },
        [&](double s) {
          const double lambda = std::pow(s, 1.0 / md);
          double prod = 1.0;
          for (const auto& f : c.fs)
            prod *= f.values()
                        .abs()
                        .unaryExpr([&](double v) { return phi_n_iterate(n, mi, v / lambda); })
                        .sum() *
                    f.cell_measure();
          return std::pow(prod, 1.0 / md);
        });
  });
}

const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names = {"tm1", "tm2",   "cor",        "jmz",
                                                 "weighted-jmz", "saito-tanaka", "thm-a",
                                                 "endpoint-m"};
  return names;
}

RatioReport verify_theorem(const std::string& theorem, const VerificationCase& c,
                           const VerifyOptions& opt) {
  if (theorem == "tm1") return verify_tm1(c, opt);
  if (theorem == "tm2") return verify_tm2(c, opt);
  if (theorem == "cor") return verify_corollary(c, opt);
  if (theorem == "jmz") return verify_endpoint_jmz(c, opt);
  if (theorem == "weighted-jmz") return verify_endpoint_weighted(c, opt);
  if (theorem == "saito-tanaka") return verify_saito_tanaka(c, opt);
  if (theorem == "thm-a") return verify_theorem_a(c, opt);
  if (theorem == "endpoint-m") return verify_endpoint_multilinear(c, opt);
  throw ConfigError("unknown theorem '" + theorem + "'");
}

SharpnessCurve sharpness_probe(int n, int m, int k, const std::vector<Index>& ladder,
                               std::vector<double> levels) {
  require(n >= 1 && n <= kMaxDims, "sharpness probe needs 1 <= n <= 4");
  require(m >= 1 && k >= 1 && k <= m, "sharpness probe needs 1 <= k <= m");
  if (levels.empty())
    for (int e = -4; e <= 4; ++e) levels.push_back(std::pow(2.0, 0.5 * e));
  SharpnessCurve curve{k, ladder, {}};
  for (Index side : ladder) {
    std::vector<Index> extents(static_cast<std::size_t>(n), side);
    const Dims dims{std::span<const Index>(extents)};
    const double cm = 1.0 / static_cast<double>(dims.cells());
    std::vector<GridFunctiond> fs(static_cast<std::size_t>(m), GridFunctiond(dims, cm));
    fs[0][0] = static_cast<double>(dims.cells());
    for (int i = 1; i < m; ++i) fs[static_cast<std::size_t>(i)][0] = 1.0;
    const auto mf = multilinear_strong(fs);
    double best = 0.0;
    for (double lambda : levels) {
      const double lhs = level_mass(mf, std::pow(lambda, m), nullptr);
      double prod = 1.0;
      for (const auto& f : fs)
        prod *= f.values().unaryExpr([&](double v) { return phi_n_iterate(n, k, v / lambda); }).sum() *
                cm;
      const double rhs = std::pow(prod, 1.0 / m);
      if (rhs > 0.0) best = std::max(best, lhs / rhs);
    }
    curve.ratios.push_back(best);
  }
  return curve;
}

SuiteConfig default_suite() {
  SuiteConfig c;
  c.seed = 7;
  c.refinements = {8, 16};
  const std::string box = "box:0.125:0.625:0.25:0.875";
  const std::string pole = "power:-0.5";
  const std::vector<std::string> ainf = {"constant", "power:0.5", "power:-0.5",
                                         "checkerboard:4:smooth", "lognormal:0.5"};
  for (const auto& w : ainf)
    c.cases.push_back({"tm1-" + w, "tm1", 2, {box, pole}, {w, w}, {2, 2}, {"llogk:1", "llogk:1"}, {}, {}});
  const std::vector<std::pair<std::string, std::string>> arbitrary = {
      {"constant", "constant"},
      {"delta-spike:1", "delta-spike:1"},
      {"zero-half", "zero-half"},
      {"checkerboard:16", "power:1"}};
  for (const auto& [w1, w2] : arbitrary)
    c.cases.push_back({"tm2-" + w1 + "-" + w2, "tm2", 2, {box, pole}, {w1, w2}, {2, 2}, {}, {}, {}});
  c.cases.push_back({"tm2-zero", "tm2", 2, {"constant:0", "constant:0"}, {"constant", "constant"}, {2, 2}, {}, {}, {}});
  c.cases.push_back({"cor-checkerboard", "cor", 2, {box, pole}, {"checkerboard:8", "constant"}, {3, 3}, {}, {}, {}});
  c.cases.push_back({"cor-spike", "cor", 2, {box, "random"}, {"delta-spike:1", "zero-half"}, {2, 4}, {}, {}, {}});
  c.cases.push_back({"jmz-pole", "jmz", 2, {"power:-1"}, {}, {}, {}, {}, {}});
  c.cases.push_back({"jmz-spike", "jmz", 2, {"delta-spike:1"}, {}, {}, {}, {}, {}});
  c.cases.push_back({"weighted-jmz-lognormal", "weighted-jmz", 2, {pole}, {"lognormal:1"}, {}, {}, {}, {}});
  c.cases.push_back({"saito-tanaka-zero-half", "saito-tanaka", 2, {"power:-1"}, {"zero-half"}, {}, {}, {}, {}});
  c.cases.push_back({"thm-a-spike", "thm-a", 2, {box}, {"delta-spike:1"}, {2}, {}, {}, {}});
  c.cases.push_back({"endpoint-m-spikes", "endpoint-m", 2, {"delta-spike:1", "power:-1"}, {}, {}, {}, {}, {}});
  c.sharpness = SharpnessConfig{2, 2, {8, 16, 32, 64}};
  return c;
}

VerificationCase instantiate(const SuiteCase& sc, Index side, std::uint64_t seed,
                             std::size_t case_index) {
  std::vector<Index> extents(static_cast<std::size_t>(sc.rank), side);
  const Dims dims{std::span<const Index>(extents)};
  VerificationCase c;
  c.label = sc.label + "-" + std::to_string(side);
  const std::uint64_t base = splitmix64(seed ^ splitmix64(case_index));
  std::uint64_t stream = 0;
  for (const auto& kind : sc.fs) c.fs.push_back(weight_catalog(dims, kind, splitmix64(base + stream++)));
  for (const auto& kind : sc.omegas)
    c.omegas.push_back(weight_catalog(dims, kind, splitmix64(base + stream++)));
  c.ps = sc.ps;
  for (const auto& name : sc.psis) c.psis.push_back(YoungFunction::parse(name));
  c.levels = sc.levels;
  return c;
}

bool SuiteResult::any_violation() const {
  return std::any_of(reports.begin(), reports.end(),
                     [](const auto& r) { return r.second.violation; });
}

SuiteResult suite_sweep(const SuiteConfig& config, const std::optional<std::string>& theorem,
                        const std::optional<std::filesystem::path>& out_dir,
                        const VerifyOptions& opt_in, bool timings) {
  VerifyOptions opt = opt_in;
  opt.tol = config.tol;
  SuiteResult result;
  for (std::size_t k = 0; k < config.cases.size(); ++k) {
    const auto& sc = config.cases[k];
    if (theorem && *theorem != sc.theorem) continue;
    const auto& ladder = sc.refinements.empty() ? config.refinements : sc.refinements;
    for (Index side : ladder)
      result.reports.emplace_back(side, verify_theorem(sc.theorem, instantiate(sc, side, config.seed, k), opt));
  }

  for (const auto& name : theorem_names()) {
    std::map<Index, SummaryRow> rows;
    for (const auto& [side, rep] : result.reports) {
      if (rep.theorem != name) continue;
      auto& row = rows[side];
      row.theorem = name;
      row.refinement = side;
      if (row.cases == 0 || rep.ratio > row.max_ratio) {
        row.max_ratio = rep.ratio;
        row.max_case = rep.label;
      }
      ++row.cases;
      row.violations += rep.violation ? 1 : 0;
    }
    for (const auto& [side, row] : rows) result.summary.push_back(row);
  }

  if (config.sharpness && (!theorem || *theorem == "sharpness")) {
    const auto& s = *config.sharpness;
    for (int k = 1; k <= s.m; ++k) result.sharpness.push_back(sharpness_probe(s.n, s.m, k, s.ladder));
  }

  if (out_dir) {
    for (const auto& [side, rep] : result.reports)
      io::write_text(*out_dir / "reports" / (rep.label + ".json"), io::to_json(rep, timings).dump(2) + "\n");
    std::ostringstream summary;
    summary << "theorem,refinement,cases,max_ratio,max_case,violations\n";
    for (const auto& row : result.summary)
      summary << row.theorem << ',' << row.refinement << ',' << row.cases << ','
              << csv_number(row.max_ratio) << ',' << row.max_case << ',' << row.violations << '\n';
    io::write_text(*out_dir / "summary.csv", summary.str());
    std::ostringstream cases;
    cases << "theorem,case,refinement,lhs,rhs,ratio,degenerate,violation,in_hypothesis\n";
    for (const auto& [side, rep] : result.reports)
      cases << rep.theorem << ',' << rep.label << ',' << side << ',' << csv_number(rep.lhs) << ','
            << csv_number(rep.rhs) << ',' << csv_number(rep.ratio) << ',' << rep.degenerate << ','
            << rep.violation << ',' << rep.in_hypothesis << '\n';
    io::write_text(*out_dir / "cases.csv", cases.str());
    if (!result.sharpness.empty()) {
      std::ostringstream sharp;
      sharp << "n,m,k,side,ratio\n";
      for (const auto& curve : result.sharpness)
        for (std::size_t r = 0; r < curve.ladder.size(); ++r)
          sharp << config.sharpness->n << ',' << config.sharpness->m << ',' << curve.k << ','
                << curve.ladder[r] << ',' << csv_number(curve.ratios[r]) << '\n';
      io::write_text(*out_dir / "sharpness.csv", sharp.str());
    }
  }
  return result;
}

}  // namespace strongmax
