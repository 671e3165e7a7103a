#pragma once

#include "strongmax/grid.hpp"
#include "strongmax/maximal.hpp"
#include "strongmax/young.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace strongmax {

/// One instance of an inequality: the functions, weights, exponents and
/// Young functions it needs. Unused fields stay empty.
struct VerificationCase {
  std::string label;
  std::vector<GridFunctiond> fs;
  std::vector<GridFunctiond> omegas;
  std::vector<double> ps;
  std::vector<YoungFunction> psis;
  /// Levels t (or lambda). Empty selects 12 log-spaced levels from the data.
  std::vector<double> levels;
};

struct LevelRow {
  double level = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Both sides of an inequality and their ratio. For level sweeps the ratio is
/// the maximum over levels and lhs/rhs are taken at the maximising level.
struct RatioReport {
  std::string label;
  std::string theorem;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<LevelRow> rows;
  bool degenerate = false;    // rhs = 0 and lhs = 0 everywhere it was evaluated
  bool violation = false;     // rhs = 0 with lhs > 0 somewhere
  bool in_hypothesis = true;  // false when a theorem hypothesis failed its gate
  std::vector<std::string> warnings;
  std::vector<Index> witness;  // a level-set point at a violating level, if any
  double runtime_seconds = 0.0;
};

struct VerifyOptions {
  Engine engine = Engine::Fast;
  double tol = 1e-9;  // Luxemburg tolerance
};

/// 12 log-spaced values from 1e-3 * top to top; empty when top <= 0.
std::vector<double> default_levels(double top);

/// Weighted Orlicz strong-type inequality with nu = prod omega_j^{p/p_j}.
RatioReport verify_tm1(const VerificationCase& c, const VerifyOptions& opt = {});
/// Weak type with iterated weights: nu({M(f) > t^m})^{1/p} against prod_j t^-1 ||f_j||_{L^{p_j}(W_j)}.
RatioReport verify_tm2(const VerificationCase& c, const VerifyOptions& opt = {});
/// Strong type with iterated weights.
RatioReport verify_corollary(const VerificationCase& c, const VerifyOptions& opt = {});
/// |{M_R f > lambda}| against the integral of Phi_n(|f| / lambda). Uses fs[0].
RatioReport verify_endpoint_jmz(const VerificationCase& c, const VerifyOptions& opt = {});
/// omega({M_R f > lambda}) against the integral of Phi_n(|f| / lambda) M_R omega.
RatioReport verify_endpoint_weighted(const VerificationCase& c, const VerifyOptions& opt = {});
/// n = 2 only: omega({M_R f > t}) against the L log L integral with W = M_R M_Q omega.
RatioReport verify_saito_tanaka(const VerificationCase& c, const VerifyOptions& opt = {});
/// omega({M_R f > t})^{1/p} against t^-1 ||f||_{L^p(W)}, W the iterated weight. Uses ps[0].
RatioReport verify_theorem_a(const VerificationCase& c, const VerifyOptions& opt = {});
/// |{M(f) > lambda^m}| against (prod_i integral Phi_n^(m)(|f_i| / lambda))^{1/m}.
RatioReport verify_endpoint_multilinear(const VerificationCase& c, const VerifyOptions& opt = {});

/// Runs the verifier registered under `theorem` (tm1, tm2, cor, jmz,
/// weighted-jmz, saito-tanaka, thm-a, endpoint-m).
RatioReport verify_theorem(const std::string& theorem, const VerificationCase& c,
                           const VerifyOptions& opt = {});
const std::vector<std::string>& theorem_names();

/// The endpoint ratio with Phi_n^(k) in place of Phi_n^(m), evaluated on the
/// adversarial pair f_1 = N^n 1_{cell 0} (unit mass), f_i = 1_{cell 0} for
/// i > 1, on the cube lattices of the ladder. levels defaults to 2^-2 .. 2^2
/// in steps of 2^(1/2).
struct SharpnessCurve {
  int k = 0;
  std::vector<Index> ladder;
  std::vector<double> ratios;
};
SharpnessCurve sharpness_probe(int n, int m, int k, const std::vector<Index>& ladder,
                               std::vector<double> levels = {});

/// A catalog-driven case template, instantiated at each refinement.
struct SuiteCase {
  std::string label;
  std::string theorem;
  int rank = 2;
  std::vector<std::string> fs;      // weight_catalog kinds
  std::vector<std::string> omegas;  // weight_catalog kinds
  std::vector<double> ps;
  std::vector<std::string> psis;    // YoungFunction::parse names
  std::vector<double> levels;
  std::vector<Index> refinements;   // overrides the suite ladder when nonempty
};

struct SharpnessConfig {
  int n = 2;
  int m = 2;
  std::vector<Index> ladder;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::vector<Index> refinements;
  double tol = 1e-9;
  std::vector<SuiteCase> cases;
  std::optional<SharpnessConfig> sharpness;
};

/// The bundled suite covering every verifier.
SuiteConfig default_suite();

/// Builds the concrete case for one refinement. Catalog seeds derive from
/// (suite seed, case position, function position).
VerificationCase instantiate(const SuiteCase& sc, Index side, std::uint64_t seed,
                             std::size_t case_index);

struct SummaryRow {
  std::string theorem;
  Index refinement = 0;
  int cases = 0;
  double max_ratio = 0.0;
  std::string max_case;
  int violations = 0;
};

struct SuiteResult {
  std::vector<std::pair<Index, RatioReport>> reports;  // (refinement, report)
  std::vector<SummaryRow> summary;
  std::vector<SharpnessCurve> sharpness;
  bool any_violation() const;
};

/// Runs every case at every refinement (optionally only one theorem). When
/// out_dir is given, writes reports/<case>.json, summary.csv, cases.csv and
/// sharpness.csv there.
SuiteResult suite_sweep(const SuiteConfig& config, const std::optional<std::string>& theorem,
                        const std::optional<std::filesystem::path>& out_dir,
                        const VerifyOptions& opt = {}, bool timings = false);

}  // namespace strongmax
