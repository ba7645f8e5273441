#include "wkot/fundamental.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wkot;

TEST_CASE("free-model table matches the closed form") {
  LagrangianModel m = LagrangianModel::free_model();
  TorusGrid grid(1, 16);
  FundamentalTable tab = build_fundamental_table(m, grid, 0.0, 0.5);
  Matrix ref = free_model_table(grid, 0.5);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      worst = std::max(worst, std::abs(tab.h(i, j) - ref(i, j)));
  CHECK(worst <= 1e-6);
  CHECK(tab.h(0, 8) == doctest::Approx(0.25).epsilon(1e-6));  // d = 1/2, tau = 1/2
  CHECK(tab.has_velocities);
  // Initial shooting velocity d / tau toward the target, short way.
  CHECK(tab.v0(0, 2) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(tab.v0(0, 14) == doctest::Approx(-0.25).epsilon(1e-4));
}

TEST_CASE("two-leg composition reproduces the one-shot table") {
  LagrangianModel m = LagrangianModel::free_model();
  TorusGrid grid(1, 16);
  FundamentalTable whole = build_fundamental_table(m, grid, 0.0, 0.5);
  FundamentalTable a = build_fundamental_table(m, grid, 0.0, 0.25);
  FundamentalTable b = build_fundamental_table(m, grid, 0.25, 0.5);
  // Relays must pass through grid nodes, so the defect is the one-cell
  // quantization of the midpoint, not zero.
  CHECK(markov_defect(whole, a, b) <= 2.0 / 16);
}

TEST_CASE("evolution operators reduce to min-plus and max-minus") {
  LagrangianModel m = LagrangianModel::free_model();
  TorusGrid grid(1, 16);
  FundamentalTable tab = build_fundamental_table(m, grid, 0.0, 0.25);
  std::mt19937_64 rng(5);
  std::vector<double> f(grid.size());
  for (double& v : f) v = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  Potential phi(f);

  Potential fwd = evolve(tab, phi, Evolution::min_plus);
  Potential bwd = evolve(tab, phi, Evolution::max_minus);
  for (std::size_t y = 0; y < grid.size(); ++y) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t x = 0; x < grid.size(); ++x) {
      lo = std::min(lo, phi[x] + tab.h(x, y));
      hi = std::max(hi, phi[x] - tab.h(y, x));
    }
    CHECK(fwd[y] == doctest::Approx(lo));
    CHECK(bwd[y] == doctest::Approx(hi));
  }
}

TEST_CASE("planar table splits into coordinate tables") {
  LagrangianModel m = LagrangianModel::free_model();
  TorusGrid grid(2, 8);
  FundamentalTable tab = build_fundamental_table_2d(m, grid, 0.0, 0.5);
  // For V = 0 the action separates into the two wrapped coordinates.
  std::size_t a = grid.flatten(1, 2), b = grid.flatten(5, 7);
  const double dx = 0.5, dy = 3.0 / 8.0;
  CHECK(tab.h(a, b) == doctest::Approx((dx * dx + dy * dy) / 1.0).epsilon(1e-6));
  CHECK(tab.h(a, a) == doctest::Approx(0.0).epsilon(1e-9));
}
