#pragma once

// Superdifferentials, singular sets, and semiconcavity estimates for grid
// potentials.  One-sided difference quotients along grid axes provide the
// reachable-gradient samples; their convex hull estimates the
// superdifferential, whose diameter flags kinks.

#include "wkot/common.hpp"
#include "wkot/space.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace wkot {

struct SuperdiffEstimate {
  std::size_t index = 0;
  int dim = 1;
  // One-sided gradient samples (second component 0 in 1-d).
  std::vector<std::array<double, 2>> d_star;
  // Convex hull of the samples: interval endpoints in 1-d, CCW vertices in 2-d.
  std::vector<std::array<double, 2>> hull;
  double diameter = 0.0;

  bool singular(double theta) const { return diameter > theta; }
};

// Gradient estimate from one-sided difference quotients at one node.
SuperdiffEstimate superdifferential(const Potential& phi, const TorusGrid& grid,
                                    std::size_t idx);

struct SemiconcavityReport {
  bool ok = true;
  double constant = 0.0;     // C used by the midpoint test
  double worst_excess = 0.0; // max of second difference - C |h|^2 over lags
  std::size_t worst_index = 0;
};

// Midpoint inequality phi(x+h) + phi(x-h) - 2 phi(x) <= C |h|^2 over all grid
// points and integer lags with |h| <= max_lag.
SemiconcavityReport semiconcavity_check(const Potential& phi, const TorusGrid& grid, double C,
                                        double max_lag = 0.25, double tol = -1.0);

// Smallest constant compatible with the lag-1 second differences (only
// positive curvature counts; concave kinks must not inflate it).
double estimate_semiconcavity(const Potential& phi, const TorusGrid& grid);

struct SingSet {
  std::vector<std::size_t> members;
  double constant = 0.0;  // semiconcavity constant used
  double theta = 0.0;     // detection threshold
  std::vector<SuperdiffEstimate> estimates;  // one per grid node
};

// Nodes whose superdifferential estimate has diameter above theta.  C < 0
// estimates the constant from the data; theta < 0 uses
// 10 * spacing * (1 + C), chosen so kink detection dominates
// finite-difference noise.  Throws DomainError when the midpoint inequality
// fails for the chosen C (the detector is only meaningful on semiconcave
// input).
SingSet sing_set(const Potential& phi, const TorusGrid& grid, double C = -1.0,
                 double theta = -1.0);

struct MarginalSuperdiff {
  SuperdiffEstimate estimate;
  std::vector<std::size_t> active;  // argmin members within the tie tolerance
};

// Superdifferential of u = min_s F[s] at one node, via the hull of the active
// members' central-difference gradients; eps < 0 uses 1e-9 * (1 + max |F|).
MarginalSuperdiff marginal_superdiff(const std::vector<Potential>& F, const TorusGrid& grid,
                                     std::size_t idx, double eps = -1.0);

// Convex hull (CCW, collinearity tolerance 1e-10) of planar points; exposed
// for tests.
std::vector<std::array<double, 2>> planar_hull(std::vector<std::array<double, 2>> pts);

}  // namespace wkot
