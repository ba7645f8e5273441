#pragma once

// Double-precision front end for the transform pair T-/T+: argmin/argmax set
// maps, commutator analysis, the c-concavity characterization and singular
// sets of c-concave potentials.

#include "wkot/space.hpp"

#include <cstddef>
#include <vector>

namespace wkot {

// Scale-aware attainment slack: 1e-9 * (1 + max |c|).
double arg_tolerance(const CostTable& c);

Potential t_minus(const Potential& phi, const CostTable& c);
Potential t_plus(const Potential& psi, const CostTable& c);

struct CSubdiffSet {
  std::size_t base = 0;                 // the point the set is attached to
  std::vector<std::size_t> members;     // attainment indices, ascending
  double tol = 0.0;

  bool contains(std::size_t i) const;
  bool empty() const { return members.empty(); }
};

// Attainment sets; eps < 0 means "use arg_tolerance(c)".
CSubdiffSet c_subdiff(const Potential& phi, const CostTable& c, std::size_t x, double eps = -1.0);
CSubdiffSet c_superdiff(const Potential& psi, const CostTable& c, std::size_t y, double eps = -1.0);

// (T- o T+)psi - psi; pointwise >= -1e-12 always.
Potential commutator_defect(const Potential& psi, const CostTable& c);

struct CConcavity {
  bool c_concave = false;
  double max_defect = 0.0;
  Potential witness_phi;                 // phi = T+ psi; T- phi = psi when c-concave
  bool superdiff_nonempty_everywhere = false;
};

CConcavity is_c_concave(const Potential& psi, const CostTable& c, double eps = -1.0);

struct CSingularReport {
  std::vector<std::size_t> singular;                  // |superdiff| >= 2
  std::vector<std::size_t> cardinality;               // per target point
  std::vector<std::vector<std::size_t>> superdiff;    // per target point
  std::vector<std::vector<std::size_t>> reachable;    // subset of superdiff
  bool reachable_fallback = false;  // true when no neighbor structure was available
};

// Requires psi c-concave for c (DomainError otherwise).  y_grid, when given,
// supplies the neighbor structure used to single out reachable members:
// members matching the unique attainment point of some neighbor with singleton
// superdifferential (within 1.5 cells when x_grid is given, exactly
// otherwise).  Without y_grid the reachable sets fall back to the full
// superdifferentials and the report flags it.
//
// span_gate: on an x grid, a target counts as singular only when its
// eps-near-argmin members spread wider than this distance.  Negative = 1.5
// cells, appropriate when eps is at the value-noise scale; callers whose
// sections have curvature kappa should pass at least 2 sqrt(2 eps / kappa)
// plus a cell, the width of the eps-sublevel of a single quadratic basin.
CSingularReport sing_c(const Potential& psi, const CostTable& c,
                       const TorusGrid* y_grid = nullptr,
                       const TorusGrid* x_grid = nullptr, double eps = -1.0,
                       double span_gate = -1.0);

}  // namespace wkot
