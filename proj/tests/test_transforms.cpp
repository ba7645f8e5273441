#include "wkot/clax.hpp"
#include "wkot/clax_core.hpp"

#include <doctest.h>

#include "exact_rational.hpp"

#include <random>

using namespace wkot;

namespace {

CostTable swap_cost() {
  Matrix c(2, 2);
  c(0, 1) = c(1, 0) = 1.0;
  return CostTable(c);
}

}  // namespace

TEST_CASE("two point transform oracle") {
  CostTable c = swap_cost();
  Potential phi(std::vector<double>{0.0, 5.0});
  Potential tm = t_minus(phi, c);
  CHECK(tm[0] == doctest::Approx(0.0));
  CHECK(tm[1] == doctest::Approx(1.0));

  // The far point never attains the minimum; the near one attains both.
  CHECK(c_subdiff(phi, c, 1).empty());
  CHECK(c_subdiff(phi, c, 0).members == std::vector<std::size_t>{0, 1});

  // tm is a transform image, hence concave for c with zero defect.
  CConcavity conc = is_c_concave(tm, c);
  CHECK(conc.c_concave);
  CHECK(conc.max_defect <= 1e-15);
  CHECK(conc.superdiff_nonempty_everywhere);
  CHECK(c_superdiff(tm, c, 0).members == std::vector<std::size_t>{0});
  CHECK(c_superdiff(tm, c, 1).members == std::vector<std::size_t>{0, 1});

  // phi itself is not concave for c: the defect localizes at the first point
  // and exactly the zero-defect point keeps a nonempty attainment set.
  CConcavity bad = is_c_concave(phi, c);
  CHECK_FALSE(bad.c_concave);
  CHECK(bad.max_defect == doctest::Approx(4.0));
  Potential defect = commutator_defect(phi, c);
  CHECK(defect[0] == doctest::Approx(4.0));
  CHECK(defect[1] == doctest::Approx(0.0));
  CHECK(c_superdiff(phi, c, 0).empty());
  CHECK_FALSE(c_superdiff(phi, c, 1).empty());
}

TEST_CASE("order laws and idempotence on random instances") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> cost(0.0, 5.0), val(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t nx = size(rng), ny = size(rng);
    Matrix c(nx, ny);
    for (double& v : c.data) v = cost(rng);
    CostTable ct(c);
    std::vector<double> f(ny);
    for (double& v : f) v = val(rng);
    Potential psi(f);

    Potential up = t_minus(t_plus(psi, ct), ct);
    for (std::size_t y = 0; y < ny; ++y) CHECK(up[y] >= psi[y] - 1e-12);

    std::vector<double> g(nx);
    for (double& v : g) v = val(rng);
    Potential phi(g);
    Potential down = t_plus(t_minus(phi, ct), ct);
    for (std::size_t x = 0; x < nx; ++x) CHECK(down[x] <= phi[x] + 1e-12);

    // One round trip is a projection: a second changes nothing.
    Potential once = t_minus(phi, ct);
    Potential twice = t_minus(t_plus(once, ct), ct);
    for (std::size_t y = 0; y < ny; ++y) CHECK(std::abs(twice[y] - once[y]) <= 1e-12);
  }
}

TEST_CASE("exact rational kernels characterize concavity with zero tolerance") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long long> numer(-20, 20), denom(1, 10);
  std::uniform_int_distribution<std::size_t> size(1, 6);
  const Rat zero(0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nx = size(rng), ny = size(rng);
    MatrixT<Rat> c(nx, ny);
    for (auto& v : c.data) v = Rat(std::abs(numer(rng)), denom(rng));
    std::vector<Rat> psi(ny);
    for (auto& v : psi) v = Rat(numer(rng), denom(rng));

    // Transform images have exactly zero defect ...
    std::vector<Rat> phi(nx);
    for (auto& v : phi) v = Rat(numer(rng), denom(rng));
    std::vector<Rat> image = claxcore::t_minus(phi, c);
    for (const Rat& v : claxcore::commutator_defect(image, c)) CHECK(v == zero);

    // ... and for an arbitrary potential, defect zero at a point is exactly
    // equivalent to a nonempty attainment set there.
    std::vector<Rat> d = claxcore::commutator_defect(psi, c);
    auto sets = claxcore::superdiff_sets(psi, c, zero);
    for (std::size_t y = 0; y < ny; ++y) {
      CHECK(zero <= d[y]);
      CHECK((d[y] == zero) == !sets[y].empty());
    }
  }
}
