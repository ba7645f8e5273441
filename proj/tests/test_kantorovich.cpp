#include "wkot/kantorovich.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace wkot;

namespace {

CostTable random_cost(std::mt19937_64& rng, std::size_t nr, std::size_t nc, double scale = 10.0) {
  Matrix c(nr, nc);
  for (double& v : c.data) v = std::uniform_real_distribution<double>(0.0, scale)(rng);
  return CostTable(c);
}

ProbMeasure random_measure(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    v = u * u;
    total += v;
  }
  if (total == 0.0) w[0] = total = 1.0;
  for (double& v : w) v /= total;
  return ProbMeasure(w);
}

}  // namespace

TEST_CASE("transport between point masses costs the table entry") {
  std::mt19937_64 rng(11);
  CostTable c = random_cost(rng, 4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      KantorovichResult r =
          solve_kantorovich(ProbMeasure::dirac(i, 4), ProbMeasure::dirac(j, 4), c);
      CHECK(r.value == doctest::Approx(c(i, j)).epsilon(1e-10));
      CHECK(r.certified);
    }
}

TEST_CASE("uniform marginals solve at a permutation (Birkhoff vertex)") {
  std::mt19937_64 rng(13);
  const std::size_t n = 5;
  CostTable c = random_cost(rng, n, n);
  KantorovichResult r = solve_kantorovich(ProbMeasure::uniform(n), ProbMeasure::uniform(n), c);

  // Brute force over all 120 assignments.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t(0));
  double best = std::numeric_limits<double>::infinity();
  do {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += c(i, perm[i]) / n;
    best = std::min(best, v);
  } while (std::next_permutation(perm.begin(), perm.end()));

  CHECK(r.value == doctest::Approx(best).epsilon(1e-10));
  CHECK(r.gap <= 1e-9);
  // The plan itself sits at a vertex: every row holds a single atom of 1/n.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (r.plan(i, j) > 1e-12) ++nonzero;
    CHECK(nonzero == 1);
  }
}

TEST_CASE("certified duality and conjugate pairs on random instances") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<std::size_t> size(1, 12);
    const std::size_t nr = size(rng), nc = size(rng);
    CostTable c = random_cost(rng, nr, nc);
    ProbMeasure mu = random_measure(rng, nr), nu = random_measure(rng, nc);
    KantorovichResult r = solve_kantorovich(mu, nu, c);
    CHECK(r.certified);
    CHECK(r.gap <= 1e-9);
    CHECK(r.max_ic_violation <= 1e-9);
    CHECK(is_coupling(r.plan, mu, nu));

    // The duals form a conjugate pair.
    Potential tm = t_minus(r.phi, c);
    for (std::size_t y = 0; y < nc; ++y) CHECK(std::abs(tm[y] - r.psi[y]) <= 1e-9);
  }
}

TEST_CASE("one-potential forms agree with the plan value both ways") {
  std::mt19937_64 rng(19);
  CostTable c = random_cost(rng, 7, 9);
  ProbMeasure mu = random_measure(rng, 7), nu = random_measure(rng, 9);
  const double value = solve_kantorovich(mu, nu, c).value;

  KMinusCert km = solve_K_minus(mu, nu, c);
  CHECK(km.certified);
  CHECK(std::abs(km.evolved_side - km.plan_side) <= 1e-9);
  CHECK(std::abs(km.evolved_side - (integrate(km.phi, mu) + value)) <= 1e-9);

  KPlusCert kp = solve_K_plus(mu, nu, c);
  CHECK(kp.certified);
  CHECK(std::abs(kp.evolved_side - kp.plan_side) <= 1e-9);
  CHECK(std::abs(kp.plan_side - (integrate(kp.psi, nu) - value)) <= 1e-9);

  // Converting the minimizing potential into the maximizing form and back
  // preserves the optimal value.
  Potential psi_from_phi = t_minus(km.phi, c);
  CHECK(std::abs(integrate(psi_from_phi, nu) - integrate(km.phi, mu) - value) <= 1e-9);
  Potential phi_from_psi = t_plus(kp.psi, c);
  CHECK(std::abs(integrate(kp.psi, nu) - integrate(phi_from_psi, mu) - value) <= 1e-9);
}

TEST_CASE("optimal plans live on the zero-slack set; perturbed duals fail") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<std::size_t> size(2, 10);
    const std::size_t nr = size(rng), nc = size(rng);
    CostTable c = random_cost(rng, nr, nc);
    ProbMeasure mu = random_measure(rng, nr), nu = random_measure(rng, nc);
    KantorovichResult r = solve_kantorovich(mu, nu, c);

    SupportCheck sc = support_characterization(r.phi, r.plan, c);
    CHECK(sc.ok);
    CHECK(sc.max_slack_on_support <= 1e-9);

    // Lifting the heaviest row strictly lowers the dual objective, so the
    // perturbed potential is no longer a solution and must leave positive
    // slack on the optimal support.
    std::size_t heavy = 0;
    for (std::size_t i = 1; i < nr; ++i)
      if (mu[i] > mu[heavy]) heavy = i;
    Potential bad = r.phi;
    bad[heavy] += 0.05;
    const double obj_opt = integrate(t_minus(r.phi, c), nu) - integrate(r.phi, mu);
    const double obj_bad = integrate(t_minus(bad, c), nu) - integrate(bad, mu);
    CHECK(obj_bad < obj_opt - 1e-12);
    CHECK_FALSE(support_characterization(bad, r.plan, c).ok);
  }
}

TEST_CASE("monge maps certify against the plan value") {
  std::mt19937_64 rng(29);
  CostTable c = random_cost(rng, 5, 5);
  for (std::size_t i = 0; i < 5; ++i) c.values(i, i) = 0.0;
  ProbMeasure u = ProbMeasure::uniform(5);
  MongeReport rep = monge_check({0, 1, 2, 3, 4}, u, u, c);
  CHECK(rep.pushforward_ok);
  CHECK(rep.plan_optimal);
  CHECK(rep.value_identity);
  CHECK(rep.subdiff_membership);
  CHECK(rep.map_value == doctest::Approx(0.0));
  // A map that does not push mu onto nu is rejected up front.
  CHECK_THROWS_AS(monge_check({0, 0, 2, 3, 4}, u, u, c), DomainError);
}
