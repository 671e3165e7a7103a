#include "oracles.hpp"

#include "strongmax/prefix_sum.hpp"
#include "strongmax/rects.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace strongmax;

namespace {

GridFunctiond random_grid(const Dims& dims, std::mt19937_64& rng, double cm = 1.0) {
  GridFunctiond g(dims, cm);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (Index k = 0; k < g.size(); ++k) g[k] = u(rng);
  return g;
}

Rect random_rect(const Dims& dims, std::mt19937_64& rng) {
  Rect r;
  r.rank = dims.rank();
  for (int l = 0; l < r.rank; ++l) {
    std::uniform_int_distribution<Index> cut(0, dims[l]);
    Index a = cut(rng), b = cut(rng);
    while (a == b) b = cut(rng);
    r.lo[l] = std::min(a, b);
    r.hi[l] = std::max(a, b);
  }
  return r;
}

}  // namespace

TEST_CASE("dims parse and validate") {
  CHECK(Dims::parse("16x8") == Dims{16, 8});
  CHECK(Dims::parse("5").rank() == 1);
  CHECK(Dims{4, 4, 4}.cells() == 64);
  CHECK(Dims{3, 5}.to_string() == "3x5");
  CHECK_THROWS_AS(Dims::parse("16x"), ConfigError);
  CHECK_THROWS_AS(Dims::parse("0x4"), ConfigError);
  CHECK_THROWS_AS((Dims{1, 1, 1, 1, 1}), ConfigError);
}

TEST_CASE("rect basics") {
  const Rect r{{1, 3}, {0, 4}};
  CHECK(r.cells() == 8);
  CHECK(r.longest_side() == 4);
  CHECK(r.contains({2, 3}));
  CHECK_FALSE(r.contains({3, 0}));
  CHECK(r.within(Dims{3, 4}));
  CHECK_FALSE(r.within(Dims{2, 4}));
  CHECK_THROWS_AS((Rect{{2, 2}}), std::domain_error);
  CHECK(overlap_cells(r, Rect{{2, 5}, {3, 9}}) == 1);
}

TEST_CASE("basis parsing and validation") {
  CHECK(RectBasis::parse("all") == RectBasis::all());
  CHECK(RectBasis::parse("complexity:2") == RectBasis::complexity(2));
  CHECK(RectBasis::parse("cubes") == RectBasis::cubes());
  CHECK_THROWS_AS(RectBasis::parse("complexity:0"), ConfigError);
  CHECK_THROWS_AS(RectBasis::parse("triangles"), ConfigError);
  CHECK_THROWS_AS(RectBasis::complexity(3).validate(Dims{4, 4}), ConfigError);
  CHECK_THROWS_AS(RectBasis::dyadic().validate(Dims{6, 8}), ConfigError);
  CHECK_NOTHROW(RectBasis::dyadic().validate(Dims{8, 16}));
}

TEST_CASE("grid function validation") {
  const Dims d{2, 2};
  GridFunctiond::Values bad(4);
  bad << 1, -1, 0, 2;
  CHECK_THROWS_AS(GridFunctiond(d, bad), std::domain_error);
  bad << 1, std::nan(""), 0, 2;
  CHECK_THROWS_AS(GridFunctiond(d, bad), std::domain_error);
  CHECK_THROWS_AS(GridFunctiond(d, GridFunctiond::Values::Ones(3)), std::domain_error);
  CHECK_THROWS_AS(GridFunctiond(d, 0.0), std::domain_error);
  const auto g = GridFunctiond::constant(Dims{2, 3}, 2.0, 0.5);
  CHECK(g.integral() == doctest::Approx(6.0));
  CHECK(g.flat_index({1, 2}) == 5);
  CHECK(g.point(5)[0] == 1);
  CHECK(g.point(5)[1] == 2);
}

TEST_CASE("prefix sums match direct summation") {
  std::mt19937_64 rng(11);
  const std::vector<Dims> lattices = {Dims{13}, Dims{7, 9}, Dims{5, 4, 6}, Dims{3, 4, 2, 5}};
  for (const auto& dims : lattices) {
    const auto g = random_grid(dims, rng, 0.25);
    const PrefixSum<double> ps(g);
    for (int trial = 0; trial < 200; ++trial) {
      const Rect r = random_rect(dims, rng);
      CHECK(oracle::rel_close(ps.rect_sum(r), oracle::rect_sum(g, r), 1e-12));
    }
    CHECK(oracle::rel_close(ps.rect_sum(full_rect(dims)), g.integral(), 1e-12));
  }
}

TEST_CASE("prefix sum corner and bounds") {
  const PrefixSum<double> ps(GridFunctiond::constant(Dims{2, 2}, 1.0));
  CHECK(static_cast<double>(ps.corner({2, 2})) == 4.0);
  CHECK(static_cast<double>(ps.corner({1, 2})) == 2.0);
  CHECK_THROWS_AS(ps.rect_sum(Rect{{0, 3}, {0, 1}}), std::domain_error);
}

TEST_CASE("enumeration sizes and membership") {
  const std::vector<std::pair<Dims, RectBasis>> cases = {
      {Dims{6, 5}, RectBasis::all()},       {Dims{6, 5}, RectBasis::cubes()},
      {Dims{8, 4}, RectBasis::dyadic()},    {Dims{4, 3, 5}, RectBasis::complexity(2)},
      {Dims{4, 3, 5}, RectBasis::complexity(1)}, {Dims{9}, RectBasis::all()}};
  for (const auto& [dims, basis] : cases) {
    const auto rects = enumerate_rects(dims, basis);
    CHECK(static_cast<Index>(rects.size()) == count_rects(dims, basis));
    std::set<std::string> seen;
    for (const auto& r : rects) {
      CHECK(r.within(dims));
      seen.insert(r.to_string());
    }
    CHECK(seen.size() == rects.size());
    Index tuples = 0;
    for (const auto& t : side_tuples(dims, basis)) {
      Index anchors = 1;
      for (int l = 0; l < dims.rank(); ++l) anchors *= (dims[l] - t.side[l]) / t.stride[l] + 1;
      tuples += anchors;
    }
    CHECK(tuples == static_cast<Index>(rects.size()));
  }
  // All rectangles on 6x5: (6*7/2) * (5*6/2).
  CHECK(count_rects(Dims{6, 5}, RectBasis::all()) == 21 * 15);
}

TEST_CASE("rects containing a point agree with the definition") {
  const Dims dims{4, 8};
  const std::vector<std::pair<RectBasis, oracle::Family>> bases = {
      {RectBasis::all(), oracle::Family::All},
      {RectBasis::cubes(), oracle::Family::Cubes},
      {RectBasis::dyadic(), oracle::Family::Dyadic},
      {RectBasis::complexity(1), oracle::Family::Complexity}};
  for (const auto& [basis, fam] : bases) {
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 8; ++j) {
        const Point x{i, j};
        std::set<std::string> expected, got;
        oracle::rects_through(x, dims, fam, 1, [&](const Rect& r) { expected.insert(r.to_string()); });
        for (const auto& r : rects_containing(x, dims, basis)) got.insert(r.to_string());
        CHECK(expected == got);
      }
  }
  CHECK_THROWS_AS(rects_containing({4, 0}, dims, RectBasis::all()), std::domain_error);
}

TEST_CASE("dyadic intervals") {
  const auto iv = axis_intervals(8, RectBasis::dyadic());
  CHECK(iv.size() == 8 + 4 + 2 + 1);
  for (const auto& [lo, hi] : iv) {
    CHECK(is_power_of_two(hi - lo));
    CHECK(lo % (hi - lo) == 0);
  }
  CHECK(distinct_sides(Rect{{0, 2}, {0, 2}, {1, 5}}) == 2);
}
