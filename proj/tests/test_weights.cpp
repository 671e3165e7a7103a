#include "oracles.hpp"

#include "strongmax/weights.hpp"

#include <doctest.h>

#include <random>

using namespace strongmax;

namespace {

// max_R <w>_R <w^{1-p'}>_R^{p-1} by direct summation over every rectangle.
double ap_oracle(const GridFunctiond& w, double p) {
  const double dual = p / (p - 1);
  GridFunctiond s = w.with_values(w.values().pow(1 - dual));
  double best = 0.0;
  for (const auto& r : oracle::all_rects_2d(w.dims())) {
    const double n = static_cast<double>(r.cells()) * w.cell_measure();
    best = std::max(best, oracle::rect_sum(w, r) / n * std::pow(oracle::rect_sum(s, r) / n, p - 1));
  }
  return best;
}

}  // namespace

TEST_CASE("exponents and nu") {
  const std::vector<double> ps = {2.0, 2.0};
  CHECK(harmonic_exponent(ps) == 1.0);
  const std::vector<double> bad = {0.5};
  CHECK_THROWS_AS(harmonic_exponent(bad), ConfigError);
  const Dims dims{4, 4};
  const auto a = weight_catalog(dims, "checkerboard:3", 0);
  const auto b = weight_catalog(dims, "power:1", 0);
  const std::vector<double> q = {3.0, 1.5};
  const double p = 1.0;  // 1/3 + 2/3
  const auto nu = nu_weight(std::vector<GridFunctiond>{a, b}, q);
  for (Index k = 0; k < 16; ++k)
    CHECK(nu[k] == doctest::Approx(std::pow(a[k], p / 3.0) * std::pow(b[k], p / 1.5)).epsilon(1e-14));
}

TEST_CASE("A_p constants against direct summation") {
  const auto one = GridFunctiond::constant(Dims{5, 5}, 3.0);
  CHECK(ap_constant(one, 2.0).value == doctest::Approx(1.0).epsilon(1e-14));
  for (const std::string kind : {"power:0.7", "checkerboard:5", "lognormal:1"}) {
    const auto w = weight_catalog(Dims{6, 6}, kind, 4);
    for (double p : {1.5, 2.0, 4.0}) {
      const auto got = ap_constant(w, p);
      INFO(kind << " p=" << p);
      CHECK(oracle::rel_close(got.value, ap_oracle(w, p), 1e-12));
      CHECK(got.value >= 1.0 - 1e-12);  // Jensen
      // The reported rectangle attains the value.
      const double n = static_cast<double>(got.argmax.cells()) * w.cell_measure();
      const auto s = w.with_values(w.values().pow(1 - p / (p - 1)));
      CHECK(oracle::rel_close(
          oracle::rect_sum(w, got.argmax) / n * std::pow(oracle::rect_sum(s, got.argmax) / n, p - 1),
          got.value, 1e-12));
    }
  }
  CHECK_THROWS_AS(ap_constant(one, 1.0), ConfigError);
  CHECK_THROWS_AS(ap_constant(weight_catalog(Dims{4, 4}, "zero-half", 0), 2.0), std::domain_error);
}

TEST_CASE("A_1 constant") {
  const auto one = GridFunctiond::constant(Dims{4, 4}, 2.0);
  CHECK(a1_constant(one).value == doctest::Approx(1.0));
  const auto w = weight_catalog(Dims{5, 5}, "lognormal:1", 3);
  const auto m = oracle::pointwise_maximal({w}, oracle::Family::All);
  double best = 0.0;
  for (Index k = 0; k < w.size(); ++k) best = std::max(best, m[k] / w[k]);
  const auto got = a1_constant(w);
  CHECK(oracle::rel_close(got.value, best, 1e-12));
  CHECK(oracle::rel_close(m(got.argmax) / w(got.argmax), best, 1e-12));
}

TEST_CASE("multilinear A_p constant") {
  const auto w = weight_catalog(Dims{5, 5}, "checkerboard:4", 0);
  const std::vector<double> single = {2.0};
  CHECK(oracle::rel_close(multilinear_ap_constant(std::vector<GridFunctiond>{w}, single).value,
                          ap_constant(w, 2.0).value, 1e-12));
  // p_1 = 1 uses the infimum: max_R <nu>_R (inf_R w1)^{-p} <w2^{1-p2'}>_R^{p/p2'}.
  const auto v = weight_catalog(Dims{5, 5}, "power:0.5", 0);
  const std::vector<double> ps = {1.0, 2.0};
  const double p = 2.0 / 3.0;
  const auto nu = nu_weight(std::vector<GridFunctiond>{w, v}, ps);
  const auto s = v.with_values(v.values().pow(-1.0));
  double best = 0.0;
  for (const auto& r : oracle::all_rects_2d(w.dims())) {
    const double n = static_cast<double>(r.cells()) * w.cell_measure();
    double inf = 1e300;
    for (Index i = r.lo[0]; i < r.hi[0]; ++i)
      for (Index j = r.lo[1]; j < r.hi[1]; ++j) inf = std::min(inf, w({i, j}));
    best = std::max(best, oracle::rect_sum(nu, r) / n * std::pow(inf, -p) *
                              std::pow(oracle::rect_sum(s, r) / n, p / 2.0));
  }
  CHECK(oracle::rel_close(multilinear_ap_constant(std::vector<GridFunctiond>{w, v}, ps).value, best, 1e-12));
}

TEST_CASE("condition (A) estimator brackets the exhaustive search") {
  const Dims dims{4, 4};
  const auto w = weight_catalog(dims, "checkerboard:5", 0);
  const auto rects = oracle::all_rects_2d(dims);
  const double lambda = 0.3;
  double singles = 0.0, pairs = 0.0;
  for (std::size_t a = 0; a < rects.size(); ++a) {
    const auto ea = oracle::rect_bits(rects[a], dims);
    singles = std::max(singles, oracle::condition_a_ratio(ea, w, lambda, rects));
    pairs = std::max(pairs, singles);
    for (std::size_t b = a + 1; b < rects.size(); ++b)
      pairs = std::max(pairs, oracle::condition_a_ratio(ea | oracle::rect_bits(rects[b], dims), w, lambda, rects));
  }
  ConditionAOptions opt;
  opt.max_union = 2;
  const auto est = condition_a_estimate(w, lambda, 300, 9, opt);
  CHECK(est.c_hat >= singles - 1e-12);
  CHECK(est.c_hat <= pairs + 1e-12);
  CHECK(est.evaluated == 100 + 300);
  CHECK(est.skipped == 0);
  CHECK_FALSE(est.worst_set.empty());
}

TEST_CASE("condition (A) singles on 8x8 match exactly") {
  const Dims dims{8, 8};
  const auto w = weight_catalog(dims, "checkerboard:3", 0);
  const auto rects = oracle::all_rects_2d(dims);
  const double lambda = 0.45;
  double singles = 0.0;
  for (const auto& r : rects)
    singles = std::max(singles, oracle::condition_a_ratio(oracle::rect_bits(r, dims), w, lambda, rects));
  ConditionAOptions opt;
  opt.max_union = 1;
  CHECK(oracle::rel_close(condition_a_estimate(w, lambda, 0, 1, opt).c_hat, singles, 1e-12));
}

TEST_CASE("condition (A) sampling and errors") {
  const Dims dims{16, 16};
  const ConditionAOptions opt;
  const auto a = condition_a_sample_sets(dims, 40, 5, opt);
  const auto b = condition_a_sample_sets(dims, 40, 5, opt);
  CHECK(a == b);
  CHECK(a.size() == 40);  // 18496 singles exceed the limit
  for (const auto& set : a) {
    CHECK(set.size() >= 1);
    CHECK(set.size() <= 5);
  }
  CHECK(condition_a_sample_sets(dims, 40, 6, opt) != a);
  const auto w = weight_catalog(dims, "zero-half", 0);
  const auto est = condition_a_estimate(w, 0.5, 50, 2, opt);
  CHECK(est.skipped > 0);
  CHECK(est.evaluated + est.skipped == 50);
  CHECK_THROWS_AS(condition_a_estimate(w, 1.0, 5, 1, opt), ConfigError);
  CHECK_THROWS_AS(condition_a_estimate(GridFunctiond(dims), 0.5, 5, 1, opt), std::domain_error);
}

TEST_CASE("weight catalog") {
  const Dims dims{8, 8};
  const auto c = weight_catalog(dims, "constant", 0);
  CHECK((c.values() == 1.0).all());
  CHECK(c.cell_measure() == doctest::Approx(1.0 / 64));
  CHECK((weight_catalog(dims, "constant:2.5", 0).values() == 2.5).all());
  CHECK((weight_catalog(dims, "power:0", 0).values() == 1.0).all());
  const auto pw = weight_catalog(dims, "power:1", 0);
  // Distance from the centre of cell (3, 3) to (1/2, 1/2).
  CHECK(pw({3, 3}) == doctest::Approx(std::sqrt(2.0) / 16));
  CHECK_THROWS_AS(weight_catalog(dims, "power:-2", 0), ConfigError);
  const auto cb = weight_catalog(dims, "checkerboard:4", 0);
  CHECK(cb({0, 0}) == 4.0);
  CHECK(cb({0, 2}) == 1.0);
  CHECK(cb({2, 2}) == 4.0);
  const auto smooth = weight_catalog(dims, "checkerboard:4:smooth", 0);
  CHECK(smooth.values().minCoeff() >= 1.0);
  CHECK(smooth.values().maxCoeff() <= 4.0);
  const auto spike = weight_catalog(dims, "delta-spike:7", 0);
  CHECK(spike({4, 4}) == 7.0);
  CHECK(spike.values().sum() == 7.0);
  const auto zh = weight_catalog(dims, "zero-half:3", 0);
  CHECK(zh({3, 7}) == 0.0);
  CHECK(zh({4, 0}) == 3.0);
  const auto box = weight_catalog(dims, "box:0:0.5:0.25:1", 0);
  CHECK(box.values().sum() == 4 * 6);
  const auto ln1 = weight_catalog(dims, "lognormal:0.5", 1);
  CHECK((ln1.values() == weight_catalog(dims, "lognormal:0.5", 1).values()).all());
  CHECK_FALSE((ln1.values() == weight_catalog(dims, "lognormal:0.5", 2).values()).all());
  const auto rnd = weight_catalog(dims, "random:2", 3);
  CHECK(rnd.values().maxCoeff() < 2.0);
  CHECK(rnd.values().minCoeff() >= 0.0);
  CHECK(weight_catalog(dims, "constant", 0, 0.5).cell_measure() == 0.5);
  CHECK_THROWS_AS(weight_catalog(dims, "gaussian", 0), ConfigError);
  CHECK_THROWS_AS(weight_catalog(dims, "box:0:1", 0), ConfigError);
}
