#pragma once

// Two-point boundary solver for the least-action problem on the 1-D torus:
// min over curves x -> y in time tau of the Lagrangian action.  Strategy: for
// each winding lift of the target, scan initial velocities (adaptively, since
// the endpoint map steepens like e^{sqrt(|V''|) tau} near separatrices),
// bracket the roots of the endpoint map, refine by bisection, and keep the
// least action over all roots and lifts.  The velocity scan is shared across
// all targets of a common start point, which is what makes dense tables cheap.

#include "wkot/flow.hpp"

#include <vector>

namespace wkot {

struct ShootOptions {
  double dt = 1e-3;                 // integrator target step
  int k_wind = 3;                   // winding lifts per side
  double samples_per_unit_v = -1;   // coarse scan density; <0 = auto from stiffness
  double max_endpoint_jump = 0.25;  // subdivide scan intervals with larger |d endpoint|
  int bisect_iters = 60;
  double bracket_width_floor = 1e-13;
};

struct ShootSolution {
  bool found = false;
  double value = 0.0;    // least action
  double v0 = 0.0;       // initial velocity of the minimizer
  double v_end = 0.0;    // terminal velocity (covector at the target)
  int winding = 0;       // lift offset from the nearest representative of y - x
  bool boundary = false; // winding hit the k_wind bound: minimum is suspect
  Orbit orbit;           // minimizer samples (unwrapped); filled when requested
};

// Least-action solutions from start x to each target (both in [0,1)).
std::vector<ShootSolution> shoot_row(const LagrangianModel& m, double tau, double x,
                                     const std::vector<double>& targets,
                                     const ShootOptions& opts = {},
                                     bool want_orbits = false);

// Single-pair convenience; throws SolverError when no candidate converges.
ShootSolution fundamental_solution(const LagrangianModel& m, double t1, double t2,
                                   double x, double y, const ShootOptions& opts = {},
                                   bool want_orbit = true);

}  // namespace wkot
