#pragma once

// Exact discrete optimal transport with dual certificates: the primal plan
// comes from integer min-cost flow, the duals from the flow potentials
// projected onto the conjugate pair cone (psi = T-phi, phi = T+psi).  The two
// one-potential reformulations (minimization over first-marginal potentials
// and its mirror) are certified against the primal value.

#include "wkot/clax.hpp"
#include "wkot/common.hpp"
#include "wkot/space.hpp"

#include <cstddef>
#include <vector>

namespace wkot {

struct KantorovichResult {
  double value = 0.0;
  TransportPlan plan{Matrix(1, 1)};
  Potential phi;  // conjugate pair: psi = T- phi and phi = T+ psi
  Potential psi;
  double gap = 0.0;               // value - (∫psi dnu - ∫phi dmu)
  double max_ic_violation = 0.0;  // max psi(y) - phi(x) - c(x,y)
  bool certified = false;
};

// Exact solver; weights and costs are integerized at 1e12 resolution
// (largest-remainder on masses, rounding on costs).
KantorovichResult solve_kantorovich(const ProbMeasure& mu, const ProbMeasure& nu,
                                    const CostTable& c);

struct SlackTable {
  Matrix F;  // F(x,y) = phi(x) + c(x,y) - T-phi(y), nonnegative by construction
  double min_value = 0.0;
};

SlackTable slack_table(const Potential& phi, const CostTable& c);

struct KMinusCert {
  Potential phi;
  double evolved_side = 0.0;  // ∫ T-phi dnu
  double plan_side = 0.0;     // ∫ phi dmu + C(mu, nu)
  double gap = 0.0;
  bool certified = false;
  KantorovichResult transport;
};

// One-potential form on the first marginal: the optimal phi realizes
// ∫ T-phi dnu = ∫ phi dmu + C(mu, nu).
KMinusCert solve_K_minus(const ProbMeasure& mu, const ProbMeasure& nu, const CostTable& c,
                         double tol = 1e-9);

struct KPlusCert {
  Potential psi;
  double evolved_side = 0.0;  // ∫ T+psi dmu
  double plan_side = 0.0;     // ∫ psi dnu - C(mu, nu)
  double gap = 0.0;
  bool certified = false;
  KantorovichResult transport;
};

KPlusCert solve_K_plus(const ProbMeasure& mu, const ProbMeasure& nu, const CostTable& c,
                       double tol = 1e-9);

struct SupportCheck {
  bool ok = false;
  double max_slack_on_support = 0.0;
  SlackTable slack;
};

// Optimal plans put mass only where the slack of phi vanishes; a perturbed
// non-solution phi leaves positive slack on some support pair.
SupportCheck support_characterization(const Potential& phi, const TransportPlan& plan,
                                      const CostTable& c, double eps = -1.0);

struct DiracCondition {
  bool ok = false;
  double worst_slack = 0.0;
  double eps = 0.0;
};

// For nu = delta_{y0}: phi solves the one-potential problem iff every support
// point of mu attains the minimum defining T-phi(y0).
DiracCondition dirac_support_condition(const Potential& phi, const ProbMeasure& mu,
                                       std::size_t y0, const CostTable& c, double eps = -1.0);

struct MongeReport {
  bool pushforward_ok = false;
  bool plan_optimal = false;        // (1) map plan matches the LP value
  bool value_identity = false;      // (2) ∫ T-phi(T x) dmu = ∫ phi + c(x, Tx) dmu
  bool subdiff_membership = false;  // (3) T(x) in the c-subdifferential, mu-a.e.
  double map_value = 0.0;
  double lp_value = 0.0;
  Potential phi;  // the dual used for (2) and (3)
};

// Three-way optimal-map criterion for a point map T (T[i] = target index).
// Throws DomainError when T does not push mu to nu.
MongeReport monge_check(const std::vector<long>& T, const ProbMeasure& mu,
                        const ProbMeasure& nu, const CostTable& c,
                        const Potential* phi = nullptr, double tol = 1e-9);

}  // namespace wkot
