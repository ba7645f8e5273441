#pragma once

// Functionals on finitely supported measures: Wasserstein metrics, potential
// energy, Lipschitz-in-the-large certificates, dynamical transport costs with
// their minimizing path ensembles, and the lifted evolution operators acting
// on measures (whose values reduce to integrals of the pointwise evolution —
// the identity this module exists to verify).

#include "wkot/common.hpp"
#include "wkot/flow.hpp"
#include "wkot/fundamental.hpp"
#include "wkot/kantorovich.hpp"
#include "wkot/model.hpp"
#include "wkot/space.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wkot {

// The potential energy of a measure: ∫ phi dmu.
inline double potential_energy(const Potential& phi, const ProbMeasure& mu) {
  return integrate(phi, mu);
}

// (min over plans ∫ d^p dpi)^(1/p) for p in {1, 2}, via the exact solver.
double wasserstein_p(const ProbMeasure& mu, const ProbMeasure& nu, const Matrix& metric,
                     int p);

struct LipLargeCert {
  double k1 = 0.0, k2 = 0.0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max |phi(x)-phi(y)| - k1 d(x,y) - k2
  bool certified = false;
};

// Exhaustive check of |phi(x) - phi(y)| <= k1 d(x,y) + k2 over all pairs.
LipLargeCert lip_in_large_check(const Potential& phi, double k1, double k2,
                                const Matrix& metric);

struct PathCurve {
  std::size_t from = 0, to = 0;  // grid nodes
  double weight = 0.0;
  double action = 0.0;
  Orbit orbit;  // shared uniform time partition across an ensemble
};

struct SliceMeasure {
  double s = 0.0;
  std::vector<double> x;  // wrapped positions
  std::vector<double> v;
  std::vector<double> w;
};

struct PathEnsemble {
  double t1 = 0.0, t2 = 1.0;
  std::vector<PathCurve> curves;
  ProbMeasure law_start{std::vector<double>{1.0}};
  ProbMeasure law_end{std::vector<double>{1.0}};
  bool certified = false;         // endpoint laws match and actions match the table
  double max_action_defect = 0.0; // per-curve action vs tabulated minimal action

  SliceMeasure slice(double s) const;  // nearest sample time
};

struct RloOptions {
  double dt = 1e-3;
  double lambda = -1.0;     // localization speed bound; <0 = energy estimate x2
  double agree_tol = 1e-6;  // agreement tolerance between the displayed forms
  int competitors = 100;
  std::uint64_t seed = 20260823u;
  TableOptions table;
};

struct DynamicalCost {
  double value = 0.0;  // optimal plan integral of the fundamental solution
  TransportPlan plan;
  PathEnsemble ensemble;      // minimizing curves over the plan support
  double curve_side = 0.0;    // Σ w_i (action of curve i)
  double two_forms_gap = 0.0;
  bool consistent = false;
};

// C^{s,t}(mu, nu): least total action to transport mu to nu, with the curve
// family realizing it.  Verifies the plan integral equals the per-curve sum.
DynamicalCost dynamical_cost(const LagrangianModel& m, const ProbMeasure& mu,
                             const ProbMeasure& nu, const TorusGrid& grid, double s,
                             double t, const RloOptions& opts = {});

struct LiftedResult {
  double value = 0.0;     // ∫ (evolved phi) d(measure)
  Potential evolved;      // T phi on the grid
  ProbMeasure witness{std::vector<double>{1.0}};
  std::vector<long> foot; // per grid node: chosen endpoint, -1 off support
  PathEnsemble ensemble;
  double lambda_used = 0.0;
  double ball_radius = 0.0;
  bool lambda_enlarged = false;

  // The three displayed forms: optimal-measure, per-curve, per-time-slice.
  double expr_measure = 0.0;
  double expr_curve = 0.0;
  double expr_slice = 0.0;
  double max_expr_gap = 0.0;  // worst deviation of the three from `value`
  bool certified = false;

  // min over sampled competitor measures of their objective minus `value`
  // (for the minimization; negated for the maximization); >= -1e-8 when the
  // witness is genuinely optimal.
  double competitor_min_excess = 0.0;
};

// Minimizing lift: inf over mu of ∫phi dmu + C^{0,t}(mu, nu), localized per
// atom to the ball B(y, lambda t) and certified against ∫ T-phi dnu.  The
// localization ball is enlarged once if the optimum touches its boundary;
// a second touch throws SolverError.
LiftedResult p_minus(const LagrangianModel& m, const Potential& phi, const ProbMeasure& nu,
                     const TorusGrid& grid, double t, const RloOptions& opts = {});

// Maximizing lift: sup over nu of ∫phi dnu - C^{0,t}(mu, nu), certified
// against ∫ T+phi dmu.
LiftedResult p_plus(const LagrangianModel& m, const Potential& phi, const ProbMeasure& mu,
                    const TorusGrid& grid, double t, const RloOptions& opts = {});

struct EulerLagrangeReport {
  double max_residual = 0.0;
  std::vector<double> per_curve;
  std::vector<SliceMeasure> slices;
  bool slices_mass_ok = false;
};

// Residual of the equation of motion dv/ds = -V'(x) along each curve, in sup
// norm over interior samples (5-point derivative of the velocity samples), and
// time-slice measures with their mass checks.
EulerLagrangeReport euler_lagrange_slice_check(const LagrangianModel& m,
                                               const PathEnsemble& ens, int n_slices = 5);

}  // namespace wkot
