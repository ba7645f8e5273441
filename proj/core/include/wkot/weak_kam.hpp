#pragma once

// Stationary (long-time) objects of the action minimization problem: the
// critical value normalizing linear action growth, the Peierls barrier and its
// pseudo-distance, Aubry/static classes, and the conjugate pair of weak KAM
// solutions obtained as fixed points of the two evolution semigroups.

#include "wkot/common.hpp"
#include "wkot/fundamental.hpp"
#include "wkot/model.hpp"
#include "wkot/space.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace wkot {

struct PeierlsOptions {
  // Horizon of the base table; must divide 8 so diagnostic powers can reuse
  // it.  Negative = largest 8 / 2^m not exceeding the model's safe shooting
  // horizon.
  double t_base = -1.0;
  // Geometric time schedule t_base * 2^j runs up to this horizon.
  double t_max = 2048.0;
  // Stop doubling once the accumulated table changes less than this.
  double schedule_stop = 1e-4;
  // The schedule minimum is then closed under min-plus composition (so every
  // intermediate path length is covered); passes stop at this change.
  double closure_stop = 1e-9;
  int max_closure_passes = 64;
  TableOptions table;
};

struct PeierlsResult {
  TorusGrid grid;
  Matrix h;                  // Peierls barrier table (normalized, min over all horizons)
  double c0 = 0.0;           // critical value, closed form max V
  double lambda_step = 0.0;  // min-plus eigenvalue of the base table (= -c0 * t_base)
  double t_base = 1.0;
  FundamentalTable base;     // raw base table h(0, t_base, x, y)
  Matrix base_normalized;    // base.h - lambda_step
  std::vector<double> times; // schedule actually used
  bool schedule_converged = false;
  double schedule_last_change = 0.0;
  int closure_passes = 0;
  double closure_last_change = 0.0;

  // Barrier at continuum points (nearest grid nodes).
  double value(double x, double y) const;
  // Pseudo-distance d(x,y) = h(x,y) + h(y,x) as a table.
  Matrix pseudo_distance() const;
};

PeierlsResult compute_peierls_barrier(const LagrangianModel& m, const TorusGrid& grid,
                                      const PeierlsOptions& opts = {});

struct CriticalValue {
  double value = 0.0;           // closed form max V
  double eigen_estimate = 0.0;  // -lambda_step / t_base
  // -h(0,T,x*,x*) / T at the resting node x* = argmax V, T in {8, 16, 32},
  // computed from raw (unnormalized) table powers.
  std::array<double, 3> diagonal_estimates{};
  double max_discrepancy = 0.0;
};

// Critical value with independent cross-checks; throws SolverError when the
// estimates disagree beyond tol.
CriticalValue mane_critical_value(const LagrangianModel& m, const PeierlsResult& peierls,
                                  double tol = 1e-2);

struct StaticClassPartition {
  std::vector<std::size_t> aubry;                 // nodes with h(x,x) <= delta
  Matrix d;                                       // pseudo-distance table
  std::vector<std::vector<std::size_t>> classes;  // components of d <= delta_class on aubry
  double delta = 1e-4;
  double delta_class = 1e-4;
};

// delta < 0 uses 1e-4 for Aubry membership.  Classes merge under the larger
// tolerance max(delta, 2 spacing^2 / t_base): on the grid a relay between
// adjacent nodes costs exactly spacing^2 / (2 t_base) each way, so the
// pseudo-distance inside a continuum of static points floors at twice that,
// and a merge tolerance below the floor would shatter the continuum into
// singletons.
StaticClassPartition aubry_and_static_classes(const PeierlsResult& peierls, double delta = -1.0);

struct WeakKamOptions {
  double sup_tol = 1e-6;
  int max_iters = 10000;
  // The backward solution must be recovered by the conjugation round trip
  // within this bound.
  double compose_check_tol = 1e-4;
};

struct WeakKamPair {
  Potential u_minus;
  Potential u_plus;
  double t_step = 1.0;
  double lambda_step = 0.0;
  int iters_minus = 0;
  int iters_plus = 0;
  double residual_minus = 0.0;  // final sup-change of the backward iteration
  double residual_plus = 0.0;
  double compose_defect = 0.0;  // max |T- T+ u_minus - u_minus|
  std::size_t ref_node = 0;     // normalization node, u_minus(ref) = 0
};

// Conjugate pair for the normalized cost: u_minus is the limit of the backward
// evolution from 0 (renormalized at the resting node), u_plus the limit of the
// forward evolution applied to u_minus.  t_step < 0 reuses the Peierls base
// horizon and its table.
WeakKamPair weak_kam_pair(const LagrangianModel& m, const PeierlsResult& peierls,
                          double t_step = -1.0, const WeakKamOptions& opts = {});

struct StaticInclusionReport {
  bool included = false;      // some static class lies in the superdifferential
  std::size_t class_index = 0;
  double worst_slack = 0.0;   // max |u_plus(x) + h(x,y) - u_minus(y)| over that class
  double tol = 0.0;
};

// Checks that a whole static class realizes the admissibility equality
// u_plus(x) + h(x,y) = u_minus(y) at the given target node, i.e. lies in the
// c-superdifferential of u_minus for the Peierls cost.  tol < 0 = derive from
// the pair residuals.
StaticInclusionReport static_class_in_superdiff(const StaticClassPartition& partition,
                                                const Matrix& peierls_h,
                                                const WeakKamPair& pair, std::size_t y,
                                                double tol = -1.0);

}  // namespace wkot
