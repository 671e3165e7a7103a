#include "oracles.hpp"

#include "strongmax/maximal.hpp"
#include "strongmax/parallel.hpp"

#include <doctest.h>

#include <random>

using namespace strongmax;

namespace {

GridFunctiond random_grid(const Dims& dims, std::mt19937_64& rng, double sparsity = 0.0) {
  GridFunctiond g(dims, 1.0 / static_cast<double>(dims.cells()));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Index k = 0; k < g.size(); ++k) g[k] = u(rng) < sparsity ? 0.0 : 5.0 * u(rng);
  return g;
}

double max_rel_diff(const GridFunctiond& a, const GridFunctiond& b) {
  double worst = 0.0;
  for (Index k = 0; k < a.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    worst = std::max(worst, d / std::max(std::abs(b[k]), 1e-300));
  }
  return worst;
}

}  // namespace

TEST_CASE("fast maximal matches the pointwise definition") {
  std::mt19937_64 rng(21);
  struct Setup {
    Dims dims;
    RectBasis basis;
    oracle::Family fam;
    int c;
  };
  const std::vector<Setup> setups = {
      {Dims{7}, RectBasis::all(), oracle::Family::All, 0},
      {Dims{5, 6}, RectBasis::all(), oracle::Family::All, 0},
      {Dims{5, 6}, RectBasis::cubes(), oracle::Family::Cubes, 0},
      {Dims{4, 8}, RectBasis::dyadic(), oracle::Family::Dyadic, 0},
      {Dims{3, 4, 3}, RectBasis::complexity(2), oracle::Family::Complexity, 2},
      {Dims{3, 4, 3}, RectBasis::complexity(1), oracle::Family::Complexity, 1},
      {Dims{3, 3, 4}, RectBasis::all(), oracle::Family::All, 0}};
  for (const auto& s : setups) {
    for (int m = 1; m <= 2; ++m) {
      std::vector<GridFunctiond> fs;
      for (int j = 0; j < m; ++j) fs.push_back(random_grid(s.dims, rng, 0.3));
      const auto fast = multilinear_strong(fs, s.basis);
      const auto ref = oracle::pointwise_maximal(fs, s.fam, s.c);
      INFO(s.dims.to_string() << " " << s.basis.name() << " m=" << m);
      CHECK(max_rel_diff(fast, ref) <= 1e-12);
    }
  }
}

TEST_CASE("fast and brute-force engines agree") {
  std::mt19937_64 rng(4);
  const Dims dims{6, 7};
  const std::vector<GridFunctiond> fs = {random_grid(dims, rng, 0.2), random_grid(dims, rng)};
  MaximalRequest<double> req{fs, RectBasis::all(), {}, 1e-10};
  CHECK(max_rel_diff(evaluate(req, Engine::Fast), evaluate(req, Engine::BruteForce)) <= 1e-12);
  req.young = {YoungFunction::llogk(1.0), YoungFunction::power(2.0)};
  CHECK(max_rel_diff(evaluate(req, Engine::Fast), evaluate(req, Engine::BruteForce)) <= 1e-9);
  req.basis = RectBasis::cubes();
  CHECK(max_rel_diff(evaluate(req, Engine::Fast), evaluate(req, Engine::BruteForce)) <= 1e-9);
}

TEST_CASE("constants, zeros and pointwise lower bound") {
  const Dims dims{5, 4};
  const auto c = GridFunctiond::constant(dims, 2.5, 0.05);
  const auto mc = strong_maximal(c);
  CHECK((mc.values() == 2.5).all());
  CHECK(mc.cell_measure() == 0.05);
  CHECK((strong_maximal(GridFunctiond(dims)).values() == 0.0).all());
  std::mt19937_64 rng(9);
  const auto f = random_grid(dims, rng, 0.5);
  CHECK((strong_maximal(f).values() >= f.values()).all());
  CHECK((hl_maximal(f).values() >= f.values()).all());
}

TEST_CASE("basis ordering and tensor domination") {
  std::mt19937_64 rng(12);
  const Dims dims{4, 4, 4};
  const auto f = random_grid(dims, rng, 0.4);
  const auto g = random_grid(dims, rng, 0.4);
  const auto h = hl_maximal(f);
  const auto c1 = complexity_maximal(f, 1);
  const auto c2 = complexity_maximal(f, 2);
  const auto s = strong_maximal(f);
  CHECK(max_rel_diff(c1, h) <= 1e-12);
  CHECK(max_rel_diff(complexity_maximal(f, 3), s) <= 1e-12);
  CHECK((c1.values() <= c2.values() * (1 + 1e-12)).all());
  CHECK((c2.values() <= s.values() * (1 + 1e-12)).all());
  CHECK((strong_maximal(f, RectBasis::dyadic()).values() <= s.values() * (1 + 1e-12)).all());
  // M(f, g) <= M f * M g.
  const auto fg = multilinear_strong(std::vector<GridFunctiond>{f, g});
  CHECK((fg.values() <= s.values() * strong_maximal(g).values() * (1 + 1e-12)).all());
}

TEST_CASE("orlicz maximal reductions") {
  std::mt19937_64 rng(14);
  const Dims dims{6, 5};
  const std::vector<GridFunctiond> fs = {random_grid(dims, rng), random_grid(dims, rng, 0.3)};
  const auto plain = multilinear_strong(fs);
  const auto ident = multilinear_orlicz(fs, {YoungFunction::identity(), YoungFunction::identity()});
  CHECK(max_rel_diff(ident, plain) <= 1e-9);
  const auto sq = multilinear_orlicz(fs, {YoungFunction::power(2), YoungFunction::power(2)});
  CHECK((sq.values() >= plain.values() * (1 - 1e-9)).all());
  CHECK_THROWS_AS(multilinear_orlicz(fs, {YoungFunction::identity()}), ConfigError);
}

TEST_CASE("iterated weight") {
  std::mt19937_64 rng(2);
  const auto w1 = random_grid(Dims{9}, rng, 0.5);
  CHECK(max_rel_diff(iterated_weight(w1), hl_maximal(w1)) == 0.0);
  const auto w2 = random_grid(Dims{6, 6}, rng, 0.7);
  const auto expect = strong_maximal(complexity_maximal(w2, 1));
  CHECK(max_rel_diff(iterated_weight(w2), expect) <= 1e-12);
  CHECK(max_rel_diff(iterated_weight(w2), iterated_weight(w2, Engine::BruteForce)) <= 1e-12);
  CHECK((iterated_weight(w2).values() >= w2.values()).all());
}

TEST_CASE("brute force guard and input errors") {
  MaximalRequest<double> req;
  req.inputs = {GridFunctiond(Dims{64, 64})};
  CHECK_THROWS_AS(brute_force_maximal(req), std::length_error);
  const std::vector<GridFunctiond> mismatched = {GridFunctiond(Dims{4, 4}), GridFunctiond(Dims{4, 5})};
  CHECK_THROWS_AS(multilinear_strong(mismatched), std::domain_error);
  CHECK_THROWS_AS(strong_maximal(GridFunctiond(Dims{6, 6}), RectBasis::dyadic()), ConfigError);
}

TEST_CASE("thread count does not change results") {
  std::mt19937_64 rng(30);
  const auto f = random_grid(Dims{9, 10}, rng);
  const int saved = jobs();
  set_jobs(1);
  const auto one = strong_maximal(f);
  const auto orl1 = multilinear_orlicz(std::vector<GridFunctiond>{f}, {YoungFunction::llogk(1)});
  set_jobs(3);
  const auto three = strong_maximal(f);
  const auto orl3 = multilinear_orlicz(std::vector<GridFunctiond>{f}, {YoungFunction::llogk(1)});
  set_jobs(saved);
  CHECK((one.values() == three.values()).all());
  CHECK((orl1.values() == orl3.values()).all());
}
