#include "strongmax/cli.hpp"

#include "strongmax/covering.hpp"
#include "strongmax/io.hpp"
#include "strongmax/maximal.hpp"
#include "strongmax/parallel.hpp"
#include "strongmax/verify.hpp"
#include "strongmax/weights.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>
#include <random>

namespace strongmax::cli {

namespace {

using io::json;

std::vector<GridFunctiond> read_grids(const std::vector<std::string>& paths) {
  std::vector<GridFunctiond> out;
  for (const auto& p : paths) out.push_back(io::read_grid(p));
  return out;
}

void emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << j.dump(2) << '\n';
  else
    io::write_text(path, j.dump(2) + "\n");
}

Engine parse_engine(const std::string& s) {
  if (s == "fast") return Engine::Fast;
  if (s == "brute") return Engine::BruteForce;
  throw ConfigError("unknown engine '" + s + "'");
}

// Operator names of `compute` and `bench`, turned into a maximal request.
MaximalRequest<double> request_for(const std::string& op, std::vector<GridFunctiond> inputs,
                                   const std::string& basis, const std::vector<std::string>& psis,
                                   double tol) {
  MaximalRequest<double> req;
  req.inputs = std::move(inputs);
  req.tol = tol;
  req.basis = RectBasis::parse(basis);
  const bool single = op == "hl" || op == "strong" || op.rfind("complexity:", 0) == 0;
  if (single && req.inputs.size() != 1) throw ConfigError(op + " takes exactly one --in");
  if (op == "hl") {
    req.basis = RectBasis::cubes();
  } else if (op.rfind("complexity:", 0) == 0) {
    req.basis = RectBasis::parse(op);
  } else if (op == "multi-orlicz") {
    if (psis.size() != req.inputs.size()) throw ConfigError("multi-orlicz needs one --psi per --in");
    for (const auto& p : psis) req.young.push_back(YoungFunction::parse(p));
  } else if (op != "strong" && op != "multi") {
    throw ConfigError("unknown operator '" + op + "'");
  }
  return req;
}

json point_json(const Point& x, int rank) { return std::vector<Index>(x.begin(), x.begin() + rank); }

json rect_constant_json(const WeightConstant& c) {
  return {{"value", io::number(c.value)}, {"argmax", io::to_json(c.argmax)}};
}

bool is_dyadic(const Rect& r) {
  for (int l = 0; l < r.rank; ++l)
    if (!is_power_of_two(r.side(l)) || r.lo[l] % r.side(l) != 0) return false;
  return true;
}

GridFunctiond random_grid(const Dims& dims, std::mt19937_64& rng) {
  GridFunctiond g(dims, 1.0 / static_cast<double>(dims.cells()));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Index k = 0; k < g.size(); ++k) g[k] = u(rng);
  return g;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete lab for multilinear strong maximal functions", "strongmax"};
  app.require_subcommand(1);
  int jobs_flag = 0;
  app.add_option("--jobs", jobs_flag, "Worker threads (default: STRONGMAX_JOBS or all cores)")
      ->check(CLI::PositiveNumber);

  // compute
  auto* compute = app.add_subcommand("compute", "Evaluate one maximal operator to a grid JSON");
  std::string op = "strong", basis = "all", engine = "fast", out_path;
  std::vector<std::string> inputs, psis;
  double tol = 1e-9;
  compute->add_option("--op", op, "hl | strong | complexity:c | multi | multi-orlicz | iterated-weight")
      ->capture_default_str();
  compute->add_option("--in", inputs, "Input grid (JSON or 2-D CSV); repeat for multilinear ops")
      ->required();
  compute->add_option("--basis", basis, "all | dyadic | cubes | complexity:c")->capture_default_str();
  compute->add_option("--psi", psis, "Young function per input for multi-orlicz");
  compute->add_option("--tol", tol, "Luxemburg tolerance")->capture_default_str();
  compute->add_option("--engine", engine, "fast | brute")->capture_default_str();
  compute->add_option("--out", out_path, "Output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  std::string theorem = "all", suite = "default", out_dir = "verify-out";
  std::optional<std::uint64_t> seed;
  std::vector<Index> refinements;
  bool timings = false;
  std::vector<std::string> weights_in;
  std::vector<double> ps, levels;
  verify->add_option("--theorem", theorem,
                     "tm1 | tm2 | cor | jmz | weighted-jmz | saito-tanaka | thm-a | endpoint-m | "
                     "sharpness | all")
      ->capture_default_str();
  verify->add_option("--suite", suite, "'default' or a suite JSON file")->capture_default_str();
  verify->add_option("--seed", seed, "Override the suite seed");
  verify->add_option("--refinements", refinements, "Override the suite refinement ladder");
  verify->add_option("--out", out_dir, "Output directory")->capture_default_str();
  verify->add_flag("--timings", timings, "Include runtimes in reports (breaks byte determinism)");
  verify->add_option("--in", inputs, "Single-case mode: function grids");
  verify->add_option("--weight", weights_in, "Single-case mode: weight grids");
  verify->add_option("--p", ps, "Single-case mode: exponents");
  verify->add_option("--psi", psis, "Single-case mode: Young functions");
  verify->add_option("--levels", levels, "Single-case mode: levels t");
  verify->add_option("--engine", engine, "fast | brute")->capture_default_str();

  // weights
  auto* weights = app.add_subcommand("weights", "Weight constants and the weight catalog");
  std::string action;
  double lambda = 0.5;
  int n_sets = 200, max_union = 5;
  std::uint64_t wseed = 0;
  std::string dims_text = "16x16", kind = "constant";
  std::optional<double> cell_measure;
  weights->add_option("action", action, "ap | a1 | multi-ap | cond-a | gen")
      ->required()
      ->check(CLI::IsMember({"ap", "a1", "multi-ap", "cond-a", "gen"}));
  weights->add_option("--in", inputs, "Weight grid(s)");
  weights->add_option("--p", ps, "Exponent(s)");
  weights->add_option("--basis", basis, "Rectangle basis")->capture_default_str();
  weights->add_option("--lambda", lambda, "Condition (A) level in (0,1)")->capture_default_str();
  weights->add_option("--sets", n_sets, "Condition (A) random sets")->capture_default_str();
  weights->add_option("--max-union", max_union, "Condition (A) rectangles per set")->capture_default_str();
  weights->add_option("--seed", wseed, "Seed")->capture_default_str();
  weights->add_option("--dims", dims_text, "gen: lattice, e.g. 16x16")->capture_default_str();
  weights->add_option("--kind", kind, "gen: catalog entry")->capture_default_str();
  weights->add_option("--cell-measure", cell_measure, "gen: cell measure (default 1/cells)");
  weights->add_option("--out", out_path, "Output file (default stdout)");

  // covering
  auto* covering = app.add_subcommand("covering", "Greedy half-overlap or scattered selection");
  std::string rects_path, mode = "greedy";
  std::optional<int> claim_c;
  covering->add_option("--rects", rects_path, "Rectangle list JSON")->required();
  covering->add_option("--dims", dims_text, "Lattice, e.g. 32x32")->required();
  covering->add_option("--mode", mode, "greedy | scattered")
      ->check(CLI::IsMember({"greedy", "scattered"}))
      ->capture_default_str();
  covering->add_option("--lambda", lambda, "Scattered threshold in (0,1)")->capture_default_str();
  covering->add_option("--c", claim_c, "Complexity of the covering-claim check (default n-1)");
  covering->add_option("--out", out_path, "Output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Fast path against the brute-force oracle");
  std::vector<std::string> bench_dims;
  std::string bench_op = "strong";
  std::uint64_t bseed = 1;
  bench->add_option("--dims", bench_dims, "Lattice ladder, e.g. --dims 8x8 16x16 32x32");
  bench->add_option("--op", bench_op, "hl | strong | complexity:c | multi | multi-orlicz")
      ->capture_default_str();
  bench->add_option("--seed", bseed, "Seed for the random inputs")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  if (jobs_flag > 0) set_jobs(jobs_flag);

  try {
    if (compute->parsed()) {
      auto grids = read_grids(inputs);
      GridFunctiond result = [&] {
        if (op == "iterated-weight") {
          if (grids.size() != 1) throw ConfigError("iterated-weight takes exactly one --in");
          return iterated_weight(grids.front(), parse_engine(engine));
        }
        return evaluate(request_for(op, std::move(grids), basis, psis, tol), parse_engine(engine));
      }();
      emit(io::to_json(result), out_path, out);
      return kExitPass;
    }

    if (verify->parsed()) {
      VerifyOptions opt;
      opt.engine = parse_engine(engine);
      if (!inputs.empty()) {
        if (theorem == "all" || theorem == "sharpness")
          throw ConfigError("single-case mode needs one --theorem");
        VerificationCase c;
        c.label = theorem;
        c.fs = read_grids(inputs);
        c.omegas = read_grids(weights_in);
        c.ps = ps;
        for (const auto& p : psis) c.psis.push_back(YoungFunction::parse(p));
        c.levels = levels;
        opt.tol = tol;
        const auto rep = verify_theorem(theorem, c, opt);
        out << io::to_json(rep, timings).dump(2) << '\n';
        return rep.violation ? kExitViolation : kExitPass;
      }
      SuiteConfig config = suite == "default" ? default_suite() : io::read_suite(suite);
      if (seed) config.seed = *seed;
      if (!refinements.empty()) config.refinements = refinements;
      std::optional<std::string> only;
      if (theorem != "all") {
        const auto& names = theorem_names();
        if (theorem != "sharpness" && std::find(names.begin(), names.end(), theorem) == names.end())
          throw ConfigError("unknown theorem '" + theorem + "'");
        only = theorem;
      }
      const auto result = suite_sweep(config, only, std::filesystem::path(out_dir), opt, timings);
      out << "theorem,refinement,cases,max_ratio,max_case,violations\n";
      for (const auto& row : result.summary)
        out << row.theorem << ',' << row.refinement << ',' << row.cases << ',' << row.max_ratio << ','
            << row.max_case << ',' << row.violations << '\n';
      for (const auto& curve : result.sharpness) {
        out << "sharpness k=" << curve.k << ':';
        for (double r : curve.ratios) out << ' ' << r;
        out << '\n';
      }
      if (!result.any_violation()) return kExitPass;
      for (const auto& [side, rep] : result.reports)
        if (rep.violation)
          err << json{{"violation", rep.label},
                      {"theorem", rep.theorem},
                      {"witness", rep.witness},
                      {"lhs", io::number(rep.lhs)},
                      {"rhs", io::number(rep.rhs)}}
                     .dump()
              << '\n';
      return kExitViolation;
    }

    if (weights->parsed()) {
      const RectBasis b = RectBasis::parse(basis);
      json result;
      if (action == "gen") {
        result = io::to_json(weight_catalog(Dims::parse(dims_text), kind, wseed, cell_measure));
      } else {
        const auto grids = read_grids(inputs);
        if (grids.empty()) throw ConfigError(action + " needs --in");
        if (action == "ap") {
          if (grids.size() != 1 || ps.size() != 1) throw ConfigError("ap takes one --in and one --p");
          result = rect_constant_json(ap_constant(grids.front(), ps.front(), b));
        } else if (action == "a1") {
          const auto c = a1_constant(grids.front(), b);
          result = {{"value", io::number(c.value)}, {"argmax", point_json(c.argmax, grids.front().rank())}};
        } else if (action == "multi-ap") {
          result = rect_constant_json(multilinear_ap_constant(grids, ps, b));
        } else {
          ConditionAOptions o;
          o.max_union = max_union;
          o.basis = b;
          const auto e = condition_a_estimate(grids.front(), lambda, n_sets, wseed, o);
          json set = json::array();
          for (const auto& r : e.worst_set) set.push_back(io::to_json(r));
          result = {{"c_hat", io::number(e.c_hat)},
                    {"worst_set", set},
                    {"evaluated", e.evaluated},
                    {"skipped", e.skipped}};
        }
      }
      emit(result, out_path, out);
      return kExitPass;
    }

    if (covering->parsed()) {
      const Dims dims = Dims::parse(dims_text);
      const auto rects = io::read_rects(rects_path);
      if (rects.empty()) throw ConfigError("empty rectangle list");
      for (const auto& r : rects)
        if (r.rank != dims.rank()) throw ConfigError("rectangle rank differs from --dims");
      if (mode == "scattered") {
        const auto kept = scattered_selection(rects, lambda, dims);
        std::vector<Rect> kept_rects;
        for (auto k : kept) kept_rects.push_back(rects[k]);
        json j = {{"lambda", lambda}, {"kept", kept}, {"scattered", is_scattered(kept_rects, lambda, dims)}};
        emit(j, out_path, out);
        return kExitPass;
      }
      const auto sel = greedy_half_selection(rects, dims);
      const auto audit = audit_selection(sel, rects);
      const int c = claim_c.value_or(std::max(1, dims.rank() - 1));
      const auto claim = verify_covering_claim(sel, rects, c);
      const bool dyadic = std::all_of(rects.begin(), rects.end(), is_dyadic);
      json j = io::to_json(sel, rects);
      j["audit"] = {{"overlap_violations", audit.overlap_violations},
                    {"exhaustion_violations", audit.exhaustion_violations},
                    {"partition_ok", audit.partition_ok}};
      j["claim"] = {{"c", c},
                    {"dyadic_input", dyadic},
                    {"holds", claim.holds},
                    {"holds_nonstrict", claim.holds_nonstrict},
                    {"min_value", io::number(claim.min_value)}};
      if (claim.witness) {
        j["claim"]["witness"] = {{"point", point_json(*claim.witness, dims.rank())},
                                 {"rect", claim.witness_rect},
                                 {"value", claim.min_value}};
      }
      emit(j, out_path, out);
      // The covering claim is only asserted for dyadic families.
      return audit.ok() && (claim.holds || !dyadic) ? kExitPass : kExitViolation;
    }

    if (bench->parsed()) {
      if (bench_dims.empty()) bench_dims = {"8x8", "16x16", "32x32"};
      std::mt19937_64 rng(bseed);
      const bool multi = bench_op == "multi" || bench_op == "multi-orlicz";
      const double limit = bench_op == "multi-orlicz" ? 1e-9 : 1e-12;
      bool agree = true;
      out << "dims,op,fast_seconds,oracle_seconds,speedup,max_rel_diff\n";
      for (const auto& d : bench_dims) {
        const Dims dims = Dims::parse(d);
        std::vector<GridFunctiond> grids{random_grid(dims, rng)};
        if (multi) grids.push_back(random_grid(dims, rng));
        const auto req = request_for(bench_op, grids, "all", {"llogk:1", "power:2"}, 1e-9);
        const auto t0 = std::chrono::steady_clock::now();
        const auto fast = evaluate(req, Engine::Fast);
        const auto t1 = std::chrono::steady_clock::now();
        const auto slow = evaluate(req, Engine::BruteForce);
        const auto t2 = std::chrono::steady_clock::now();
        const double diff = ((fast.values() - slow.values()).abs() /
                             slow.values().abs().max(std::numeric_limits<double>::min()))
                                .maxCoeff();
        const double tf = std::chrono::duration<double>(t1 - t0).count();
        const double ts = std::chrono::duration<double>(t2 - t1).count();
        out << d << ',' << bench_op << ',' << tf << ',' << ts << ',' << ts / std::max(tf, 1e-9) << ','
            << diff << '\n';
        if (!(diff <= limit)) {
          agree = false;
          err << "fast and oracle disagree on " << d << ": max relative difference " << diff << '\n';
        }
      }
      return agree ? kExitPass : kExitViolation;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace strongmax::cli
