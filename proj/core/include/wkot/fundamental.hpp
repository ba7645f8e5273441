#pragma once

// Tabulated fundamental solutions h(t1, t2, x, y) of the Hamilton-Jacobi
// evolution on a torus grid: h equals the minimal Lagrangian action among
// curves from x at time t1 to y at time t2.  Short horizons are computed by
// shooting; long horizons by min-plus composition of short-horizon tables,
// which is exactly the Markov (semigroup) property restricted to the grid.

#include "wkot/common.hpp"
#include "wkot/model.hpp"
#include "wkot/shooting.hpp"
#include "wkot/space.hpp"

#include <optional>
#include <vector>

namespace wkot {

struct FundamentalTable {
  double t1 = 0.0;
  double t2 = 1.0;
  TorusGrid grid;
  Matrix h;            // h(i, j) = min action from node i to node j
  Matrix v0;           // initial shooting velocity (only when has_velocities)
  bool has_velocities = false;
  bool any_boundary = false;  // some minimizer hit the winding search bound
  double dt = 1e-3;

  double tau() const { return t2 - t1; }
  // Transport cost c(x, y) induced by the table.
  const Matrix& cost() const { return h; }
};

struct TableOptions {
  double dt = 1e-3;
  // Longest horizon solved by direct shooting; longer horizons are split into
  // 2^k equal pieces and min-plus composed.  Negative = use the model's own
  // estimate (integrable horizon over which the scan stays well conditioned).
  double max_shoot_horizon = -1.0;
  ShootOptions shoot;
  bool keep_velocities = true;
};

// Build the table of minimal actions between all pairs of grid nodes.
FundamentalTable build_fundamental_table(const LagrangianModel& m, const TorusGrid& grid,
                                         double t1, double t2, const TableOptions& opts = {});

enum class Evolution { min_plus, max_minus };

// Apply the evolution induced by the table:
//   min_plus :  (T phi)(y) = min_x phi(x) + h(x, y)
//   max_minus:  (T phi)(x) = max_y phi(y) - h(x, y)
Potential evolve(const FundamentalTable& table, const Potential& phi, Evolution kind);

// 2-d table for the mechanical models, whose potentials split as
// V(x, y) = V1(x) + V2(y); the action then separates coordinatewise, so the
// table is the sum of two 1-d tables.
FundamentalTable build_fundamental_table_2d(const LagrangianModel& m, const TorusGrid& grid,
                                            double t1, double t2,
                                            const TableOptions& opts = {});

// max |h_{0,s+t} - min-plus(h_{0,s}, h_{s,t})| over all pairs; the tables must
// share one grid.
double markov_defect(const FundamentalTable& whole, const FundamentalTable& first,
                     const FundamentalTable& second);

// Closed-form table for the free model (V = 0): wrapped squared distance over
// twice the horizon.  Reference for validation.
Matrix free_model_table(const TorusGrid& grid, double tau);

}  // namespace wkot
