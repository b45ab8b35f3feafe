#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "planorm/numeric.hpp"
#include "planorm/whitney.hpp"

using namespace planorm;

namespace {

std::shared_ptr<const WhitneyDecomposition> make(int n, int l, double half,
                                                 int j_max) {
  std::vector<double> lo(n, -half), hi(n, half);
  return std::make_shared<WhitneyDecomposition>(
      whitney_decompose(PlaneSplit{n, l}, lo, hi, j_max));
}

}  // namespace

TEST_CASE("cube geometry in integers") {
  DyadicCube c;
  c.level = 2;
  c.m = {0, 3};
  PlaneSplit s{2, 1};
  CHECK(c.side() == 0.25);
  CHECK(c.t2(s) == 9);
  CHECK(c.dist(s) == doctest::Approx(0.75));
  CHECK(c.u2(s) == 25);  // doubled cube spans [5/8, 9/8]: gap of 5 half units
  CHECK(c.dist_doubled(s) == doctest::Approx(5.0 / 8.0));
  CHECK(c.center()[1] == doctest::Approx(0.875));

  c.m = {0, -4};  // spans [-1, -3/4]
  CHECK(c.t2(s) == 9);
  c.m = {5, 0};  // parallel offset only
  CHECK(c.t2(s) == 0);
}

TEST_CASE("selection rule picks maximal admissible cubes") {
  auto dec = make(2, 1, 1.0, 5);
  PlaneSplit s{2, 1};

  // no cube within [-1,1]^2 is admissible above level 2
  CHECK(dec->count_at(0) == 0);
  CHECK(dec->count_at(1) == 0);
  CHECK(dec->count_at(2) > 0);

  std::vector<long long> m{0, 3};
  CHECK(dec->selected_at(2, m));
  m = {0, 1};
  CHECK_FALSE(dec->selected_at(2, m));  // too close
  m = {0, 6};
  CHECK_FALSE(dec->selected_at(3, m));  // parent (0,3) already admissible

  for (const auto& c : dec->cubes) {
    CHECK(c.t2(s) >= 4 * s.n);
    CHECK(c.u2(s) > 0);  // doubled cubes stay off the plane
  }
}

TEST_CASE("diagnostics pass for all three geometries") {
  for (auto [n, l, jm] : {std::tuple{2, 1, 5}, {2, 0, 5}, {3, 1, 4}}) {
    auto dec = make(n, l, 1.0, jm);
    auto d = verify_whitney(*dec);
    INFO("n=" << n << " l=" << l);
    CHECK(d.disjoint);
    CHECK(d.max_adjacent_level_gap <= 1);
    CHECK(d.covering_defect <= d.collar_bound);
    CHECK(d.ratio_min >= 2.0);
    CHECK(d.ratio_max < 8.0);
    CHECK(d.pass);
    CHECK(d.cube_count > 0);
  }
}

TEST_CASE("covering defect shrinks with depth") {
  auto d4 = verify_whitney(*make(2, 1, 1.0, 4));
  auto d6 = verify_whitney(*make(2, 1, 1.0, 6));
  CHECK(d6.covering_defect < d4.covering_defect);
  CHECK(d6.covering_defect > 0.0);  // plane collar is never exhausted
}

TEST_CASE("canonical interior cube exists on every usable level") {
  CHECK(canonical_interior_offset(2) == 3);
  CHECK(canonical_interior_offset(3) == 4);
  auto dec = make(2, 1, 2.0, 6);
  for (int j = 1; j <= 6; ++j) {
    auto idx = canonical_interior_cube(*dec, j);
    const auto& c = dec->cubes[idx];
    CHECK(c.level == j);
    CHECK(c.m == std::vector<long long>{0, 3});
  }
}

TEST_CASE("partition of unity sums to one on the union") {
  auto dec = make(2, 1, 1.0, 5);
  auto pou = partition_of_unity(dec);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& c = dec->cubes[static_cast<std::size_t>(
        uniform01(rng) * static_cast<double>(dec->count()))];
    std::vector<double> x(2);
    for (int i = 0; i < 2; ++i)
      x[i] = (static_cast<double>(c.m[i]) + uniform01(rng)) * c.side();
    CHECK(pou.evaluate_sum(x) == doctest::Approx(1.0).epsilon(1e-12));
    auto k = pou.overlap_count(x);
    CHECK(k >= 1);
    CHECK(k <= 8);
  }
}

TEST_CASE("analytic jet matches finite differences") {
  auto dec = make(2, 1, 1.0, 5);
  auto pou = partition_of_unity(dec);
  auto idx = canonical_interior_cube(*dec, 3);
  auto c = dec->cubes[idx].center();
  // probe off-center so the gradient is nonzero
  std::vector<double> x{c[0] + 0.3 * dec->cubes[idx].side(),
                        c[1] - 0.2 * dec->cubes[idx].side()};
  auto jet = pou.jet2(idx, x);
  CHECK(jet.v > 0.0);

  double fd_h = 1e-5;
  auto at = [&](double dx, double dy) {
    std::vector<double> y{x[0] + dx, x[1] + dy};
    return pou.evaluate(idx, y);
  };
  double gx = (at(fd_h, 0) - at(-fd_h, 0)) / (2 * fd_h);
  double gy = (at(0, fd_h) - at(0, -fd_h)) / (2 * fd_h);
  CHECK(jet.grad[0] == doctest::Approx(gx).epsilon(1e-5));
  CHECK(jet.grad[1] == doctest::Approx(gy).epsilon(1e-5));

  double hxx = (at(fd_h, 0) - 2 * at(0, 0) + at(-fd_h, 0)) / (fd_h * fd_h);
  double hxy = (at(fd_h, fd_h) - at(fd_h, -fd_h) - at(-fd_h, fd_h) +
                at(-fd_h, -fd_h)) /
               (4 * fd_h * fd_h);
  CHECK(jet.hess[0] == doctest::Approx(hxx).epsilon(1e-4));
  CHECK(jet.hess[1] == doctest::Approx(hxy).epsilon(1e-4));
  CHECK(jet.hess[1] == jet.hess[2]);

  // third order falls back to differencing the analytic jet
  double d3 = pou.derivative(idx, x, MultiIndex{{3, 0}});
  std::vector<double> xp{x[0] + fd_h, x[1]}, xm{x[0] - fd_h, x[1]};
  double ref = (pou.derivative(idx, xp, MultiIndex{{2, 0}}) -
                pou.derivative(idx, xm, MultiIndex{{2, 0}})) /
               (2 * fd_h);
  CHECK(d3 == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("scaled derivative bounds repeat across levels") {
  auto dec = make(2, 1, 2.0, 6);
  auto pou = partition_of_unity(dec);
  auto sup_scaled = [&](int level) {
    auto idx = canonical_interior_cube(*dec, level);
    const auto& cube = dec->cubes[idx];
    auto c = cube.center();
    double s = cube.side(), m = 0.0;
    for (int a = -6; a <= 6; ++a)
      for (int b = -6; b <= 6; ++b) {
        std::vector<double> x{c[0] + a * s / 7.0, c[1] + b * s / 7.0};
        auto jet = pou.jet2(idx, x);
        for (double hv : jet.hess) m = std::max(m, std::abs(hv) * s * s);
      }
    return m;
  };
  double v3 = sup_scaled(3), v4 = sup_scaled(4), v5 = sup_scaled(5);
  CHECK(v4 == doctest::Approx(v3).epsilon(0.01));
  CHECK(v5 == doctest::Approx(v4).epsilon(0.01));
}

TEST_CASE("local box wraps the doubled cube") {
  DyadicCube c;
  c.level = 3;
  c.m = {0, 3};
  auto b = local_box(c, 2.0, 64);
  CHECK(b.dim() == 2);
  CHECK(b.lo[0] == doctest::Approx(c.center()[0] - 0.25));
  CHECK(b.hi[1] == doctest::Approx(c.center()[1] + 0.25));
  CHECK(b.counts() == std::vector<int>{64, 64});
}
