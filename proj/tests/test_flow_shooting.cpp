#include "wkot/flow.hpp"
#include "wkot/shooting.hpp"
#include "wkot/space.hpp"

#include <doctest.h>

#include <cmath>

using namespace wkot;

TEST_CASE("hamiltonian flow conserves energy") {
  LagrangianModel m = LagrangianModel::pendulum(1.0);
  PhasePoint s{0.3, 0.7};
  const double e0 = energy(m, s);
  PhasePoint e = hamiltonian_flow(m, s, 0.0, 2.0, 1e-3);
  // Conservation of v^2/2 + V pins the sign of the force: integrating
  // dv/ds = +V' instead would conserve v^2/2 - V and drift here.
  CHECK(std::abs(energy(m, e) - e0) <= 1e-8);
}

TEST_CASE("pendulum oscillates about the potential minimum at unit frequency") {
  // V = cos(2 pi x) has its minimum at 1/2 with V'' = 4 pi^2, so small
  // oscillations have period 1/sqrt(A) = 1 for unit amplitude.
  LagrangianModel m = LagrangianModel::pendulum(1.0);
  PhasePoint s{0.51, 0.0};
  PhasePoint e = hamiltonian_flow(m, s, 0.0, 1.0, 1e-3);
  CHECK(std::abs(e.x - 0.51) <= 1e-4);
  CHECK(std::abs(e.p) <= 1e-3);
  // The unstable equilibrium at the maximum stays put.
  PhasePoint top = hamiltonian_flow(m, {0.0, 0.0}, 0.0, 1.0, 1e-3);
  CHECK(std::abs(signed_diff(top.x, 0.0)) <= 1e-12);
}

TEST_CASE("integrator self-convergence under step refinement") {
  LagrangianModel m = LagrangianModel::pendulum(0.5);
  PhasePoint a = hamiltonian_flow(m, {0.2, 1.1}, 0.0, 1.5, 1e-3);
  PhasePoint b = hamiltonian_flow(m, {0.2, 1.1}, 0.0, 1.5, 2e-4);
  CHECK(std::abs(signed_diff(a.x, b.x)) <= 1e-6);
  CHECK(std::abs(a.p - b.p) <= 1e-6);
}

TEST_CASE("free motion accumulates the exact kinetic action") {
  LagrangianModel m = LagrangianModel::free_model();
  Orbit orbit;
  RawEndpoint e = integrate_unwrapped(m, 0.0, 1.3, 0.7, 1e-3, &orbit);
  CHECK(e.x == doctest::Approx(0.91).epsilon(1e-9));
  CHECK(e.v == doctest::Approx(1.3));
  CHECK(orbit.action == doctest::Approx(0.7 * 0.5 * 1.3 * 1.3).epsilon(1e-9));
}

TEST_CASE("shooting recovers the free-model least action") {
  LagrangianModel m = LagrangianModel::free_model();
  std::vector<double> targets{0.0, 0.3, 0.5};
  auto sols = shoot_row(m, 0.25, 0.0, targets);
  REQUIRE(sols.size() == 3);
  for (const auto& s : sols) CHECK(s.found);
  CHECK(sols[0].value == doctest::Approx(0.0).epsilon(1e-9));
  // d^2 / (2 tau) with d the wrapped distance; the short way wins.
  CHECK(sols[1].value == doctest::Approx(0.09 / 0.5).epsilon(1e-6));
  CHECK(sols[1].v0 == doctest::Approx(1.2).epsilon(1e-6));
  CHECK(sols[1].v_end == doctest::Approx(1.2).epsilon(1e-6));
  CHECK(sols[2].value == doctest::Approx(0.25 / 0.5).epsilon(1e-6));
  CHECK(std::abs(sols[2].v0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("shooting near a potential minimum stays put cheaply") {
  // Resting at the bottom for the whole horizon costs -tau V(bottom).
  LagrangianModel m = LagrangianModel::pendulum(1.0);
  auto sols = shoot_row(m, 0.3, 0.5, {0.5});
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].found);
  CHECK(sols[0].value == doctest::Approx(0.3).epsilon(1e-3));
}
