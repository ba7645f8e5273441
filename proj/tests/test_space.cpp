#include "wkot/space.hpp"

#include <doctest.h>

#include <random>

using namespace wkot;

TEST_CASE("wrapping and signed differences") {
  CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
  CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
  CHECK(wrap_unit(3.0) == doctest::Approx(0.0));
  CHECK(signed_diff(0.1, 0.9) == doctest::Approx(0.2));
  CHECK(signed_diff(0.9, 0.1) == doctest::Approx(-0.2));
  // Boundary representative: exactly +1/2, never -1/2.
  CHECK(signed_diff(0.75, 0.25) == doctest::Approx(0.5));
}

TEST_CASE("metric validation rejects broken inputs") {
  Matrix ok(2, 2);
  ok(0, 1) = ok(1, 0) = 1.0;
  CHECK_NOTHROW(validate_metric(ok));

  Matrix asym = ok;
  asym(0, 1) = 2.0;
  CHECK_THROWS_AS(validate_metric(asym), DomainError);

  Matrix tri(3, 3);  // d(0,2) = 5 > d(0,1) + d(1,2) = 2
  tri(0, 1) = tri(1, 0) = 1.0;
  tri(1, 2) = tri(2, 1) = 1.0;
  tri(0, 2) = tri(2, 0) = 5.0;
  CHECK_THROWS_AS(validate_metric(tri), DomainError);
}

TEST_CASE("torus grid indexing wraps consistently") {
  TorusGrid g(1, 8);
  CHECK(g.spacing() == doctest::Approx(0.125));
  CHECK(g.flatten(-1) == 7);
  CHECK(g.flatten(9) == 1);
  CHECK(g.distance(0, 7) == doctest::Approx(0.125));  // wraps the short way
  CHECK(g.distance(0, 4) == doctest::Approx(0.5));
  CHECK(g.nearest_node(0.99) == 0);
  CHECK(g.nearest_node(0.44) == 4);
  CHECK_NOTHROW(validate_metric(g.metric_table()));
  CHECK_THROWS_AS(TorusGrid(1, 4), DomainError);
  CHECK_THROWS_AS(TorusGrid(3, 8), DomainError);

  TorusGrid g2(2, 8);
  CHECK(g2.size() == 64);
  auto ij = g2.axes(g2.flatten(3, 5));
  CHECK(ij[0] == 3);
  CHECK(ij[1] == 5);
  CHECK(g2.neighbors(g2.flatten(0, 0)).size() == 4);
  CHECK(g2.distance(g2.flatten(0, 0), g2.flatten(1, 1)) ==
        doctest::Approx(std::sqrt(2.0) / 8.0));
}

TEST_CASE("probability measures validate and expose exact supports") {
  CHECK_THROWS_AS(ProbMeasure({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(ProbMeasure({-0.1, 1.1}), DomainError);
  ProbMeasure m({0.25, 0.0, 0.75});
  CHECK(m.support() == std::vector<std::size_t>{0, 2});
  // Sub-1e-15 dust is flushed so support comparison is a set comparison.
  ProbMeasure dusty({1.0, 1e-16});
  CHECK(dusty.support() == std::vector<std::size_t>{0});
  CHECK(ProbMeasure::dirac(2, 4).support() == std::vector<std::size_t>{2});
  CHECK(ProbMeasure::uniform(5)[3] == doctest::Approx(0.2));
}

TEST_CASE("pushforward of a finite measure") {
  ProbMeasure mu({0.2, 0.3, 0.5});
  ProbMeasure nu = pushforward({1, 1, 2}, mu, 3);
  CHECK(nu[0] == doctest::Approx(0.0));
  CHECK(nu[1] == doctest::Approx(0.5));
  CHECK(nu[2] == doctest::Approx(0.5));
  // Unmapped support point or out-of-range image is a domain error.
  CHECK_THROWS_AS(pushforward({1, -1, 2}, mu, 3), DomainError);
  CHECK_THROWS_AS(pushforward({1, 1, 3}, mu, 3), DomainError);
}

TEST_CASE("plan marginals, product plans and support projection") {
  Matrix pm(2, 2);
  pm(0, 0) = 0.5;
  pm(1, 0) = 0.2;
  pm(1, 1) = 0.3;
  TransportPlan plan(pm);
  auto [mu, nu] = plan_marginals(plan);
  CHECK(mu[0] == doctest::Approx(0.5));
  CHECK(mu[1] == doctest::Approx(0.5));
  CHECK(nu[0] == doctest::Approx(0.7));
  CHECK(nu[1] == doctest::Approx(0.3));
  CHECK(is_coupling(plan, mu, nu));
  CHECK_FALSE(is_coupling(plan, ProbMeasure({0.7, 0.3}), nu));
  CHECK(plan.support() ==
        std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 0}, {1, 1}});

  TransportPlan prod = product_measure(ProbMeasure({0.3, 0.7}), ProbMeasure({0.5, 0.5}));
  CHECK(prod(0, 0) == doctest::Approx(0.15));
  CHECK(prod(1, 1) == doctest::Approx(0.35));

  // Coordinate projections of the support match the supports of the marginals.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> size(1, 6);
    Matrix raw(size(rng), size(rng));
    double total = 0.0;
    for (double& v : raw.data) {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      v = u < 0.4 ? 0.0 : u;
      total += v;
    }
    if (total == 0.0) raw(0, 0) = total = 1.0;
    for (double& v : raw.data) v /= total;
    CHECK(projected_support_check(TransportPlan(raw)));
  }
}

TEST_CASE("integration against potentials") {
  CHECK(integrate(Potential(std::vector<double>{4.0, 8.0}), ProbMeasure({0.25, 0.75})) ==
        doctest::Approx(7.0));
  CHECK_THROWS_AS(
      Potential(std::vector<double>{1.0, std::numeric_limits<double>::infinity()}),
      DomainError);
}
