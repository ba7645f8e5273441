#include "wkot/rlo.hpp"
#include "wkot/weak_kam.hpp"

#include <doctest.h>

#include <random>

using namespace wkot;

TEST_CASE("min-plus composition oracle") {
  Matrix a(2, 2), b(2, 2);
  a(0, 0) = 0;
  a(0, 1) = 1;
  a(1, 0) = 2;
  a(1, 1) = 0;
  b(0, 0) = 1;
  b(0, 1) = 3;
  b(1, 0) = 0;
  b(1, 1) = 5;
  Matrix ab = min_plus(a, b);
  CHECK(ab(0, 0) == doctest::Approx(1));
  CHECK(ab(0, 1) == doctest::Approx(3));
  CHECK(ab(1, 0) == doctest::Approx(0));
  CHECK(ab(1, 1) == doctest::Approx(5));
}

TEST_CASE("minimum cycle mean oracle") {
  Matrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = -1;
  a(1, 0) = 3;
  a(1, 1) = 2;
  // Cycles: loops of mean 1 and 2, and the two-cycle of mean (-1 + 3)/2 = 1.
  CHECK(min_cycle_mean(a) == doctest::Approx(1.0));
  Matrix b(2, 2);
  b(0, 1) = b(1, 0) = 5.0;
  CHECK(min_cycle_mean(b) == doctest::Approx(0.0));
}

TEST_CASE("min-plus closure accumulates all path lengths") {
  Matrix a(2, 2);
  a(0, 0) = a(1, 1) = 10.0;
  a(0, 1) = a(1, 0) = 1.0;
  Matrix cl = min_plus_closure(a);
  // Best loop is the round trip through the other node.
  CHECK(cl(0, 0) == doctest::Approx(2.0));
  CHECK(cl(1, 1) == doctest::Approx(2.0));
  CHECK(cl(0, 1) == doctest::Approx(1.0));
  CHECK(cl(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("wasserstein distances on two points") {
  Matrix d(2, 2);
  d(0, 1) = d(1, 0) = 1.0;
  ProbMeasure a({1.0, 0.0}), b({0.0, 1.0});
  CHECK(wasserstein_p(a, b, d, 1) == doctest::Approx(1.0));
  CHECK(wasserstein_p(a, b, d, 2) == doctest::Approx(1.0));
  ProbMeasure c({0.7, 0.3}), e({0.3, 0.7});
  CHECK(wasserstein_p(c, e, d, 1) == doctest::Approx(0.4));
  CHECK(wasserstein_p(c, e, d, 2) == doctest::Approx(std::sqrt(0.4)));
}

TEST_CASE("wasserstein-1 satisfies the triangle inequality") {
  TorusGrid grid(1, 8);
  Matrix d = grid.metric_table();
  std::mt19937_64 rng(31);
  auto rand_measure = [&] {
    std::vector<double> w(8);
    double total = 0.0;
    for (double& v : w) {
      v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      total += v;
    }
    for (double& v : w) v /= total;
    return ProbMeasure(w);
  };
  for (int trial = 0; trial < 10; ++trial) {
    ProbMeasure x = rand_measure(), y = rand_measure(), z = rand_measure();
    CHECK(wasserstein_p(x, z, d, 1) <=
          wasserstein_p(x, y, d, 1) + wasserstein_p(y, z, d, 1) + 1e-9);
  }
}

TEST_CASE("lipschitz-in-the-large certificates") {
  Matrix d(2, 2);
  d(0, 1) = d(1, 0) = 1.0;
  Potential phi(std::vector<double>{0.0, 3.0});
  LipLargeCert tight = lip_in_large_check(phi, 1.0, 0.0, d);
  CHECK_FALSE(tight.certified);
  CHECK(tight.violations == 2);  // both ordered pairs exceed the bound
  CHECK(tight.worst_excess == doctest::Approx(2.0));
  // Zero slope plus the full oscillation always certifies.
  CHECK(lip_in_large_check(phi, 0.0, 3.0, d).certified);
}

TEST_CASE("static classes of the flat potential merge into one") {
  LagrangianModel m = LagrangianModel::free_model();
  TorusGrid grid(1, 16);
  PeierlsResult pr = compute_peierls_barrier(m, grid);
  CHECK(pr.c0 == doctest::Approx(0.0));
  // The grid barrier floors at the one-cell relay cost, linear in distance.
  CHECK(std::abs(pr.h(0, 1)) <= sq(grid.spacing()) / pr.t_base + 1e-9);
  StaticClassPartition part = aubry_and_static_classes(pr);
  CHECK(part.aubry.size() == grid.size());
  CHECK(part.classes.size() == 1);
}
