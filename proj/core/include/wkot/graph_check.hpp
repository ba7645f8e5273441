#pragma once

// Regime comparisons between the dynamical picture (Hamiltonian flow of
// gradient graphs) and the variational picture (evolution by the fundamental
// solution): smooth-window estimation, the graph-transport identity
// graph(D T_t phi) = backward flow of graph(D phi), and the short/long horizon
// relations between the two singular-set notions.

#include "wkot/clax.hpp"
#include "wkot/common.hpp"
#include "wkot/fundamental.hpp"
#include "wkot/model.hpp"
#include "wkot/semiconcave.hpp"
#include "wkot/space.hpp"

#include <cstddef>
#include <vector>

namespace wkot {

struct GraphSnapshot {
  std::vector<double> x;  // positions (wrapped)
  std::vector<double> p;  // covectors
};

struct SmoothProbe {
  bool smooth = false;
  bool argmax_unique = true;  // attainer clusters span at most ~one cell
  double grad_lip = 0.0;      // max difference quotient of the evolved gradient
  std::size_t first_bad = 0;  // node where uniqueness first failed
  std::vector<double> evolved;   // the forward-evolved potential
  std::vector<double> gradient;  // its central-difference gradient
};

struct TphiOptions {
  double t_cap = 2.0;
  double t_floor = 0.01;
  double lip_cap = -1.0;   // default 0.25 / spacing
  double eps_tie = -1.0;   // default 1e-6 * (1 + value scale)
  int bisect_iters = 8;
  TableOptions table;
};

// Whether the forward evolution of phi over horizon t is still classical:
// unique argmax clusters everywhere and a bounded gradient Lipschitz quotient.
SmoothProbe smooth_evolution_probe(const LagrangianModel& m, const Potential& phi,
                                   const TorusGrid& grid, double t,
                                   const TphiOptions& opts = {});

// Largest sampled horizon below t_cap for which the probe passes (grow then
// bisect); returns t_cap itself when the evolution never breaks.
double t_phi_estimate(const LagrangianModel& m, const Potential& phi, const TorusGrid& grid,
                      const TphiOptions& opts = {});

struct ArnaudReport {
  double hausdorff = 0.0;     // phase-space defect between the two graphs
  GraphSnapshot evolved;      // (x, gradient of the evolved potential)
  GraphSnapshot flowed;       // backward-flow image of the initial gradient graph
  double grad_lip = 0.0;
};

// Builds graph(D T_t phi) by grid evolution and the backward flow image of
// graph(D phi) by time integration, and returns their symmetric Hausdorff
// distance; throws DomainError when t lies past the smooth window.
ArnaudReport arnaud_graph_check(const LagrangianModel& m, const Potential& phi,
                                const TorusGrid& grid, double t, double dt);

struct RegimeOptions {
  double clax_eps_floor = 1e-3;
  // Tie window for superdifferential membership, as a multiple of the
  // quadratic quantization spacing^2 / (2 tau) of a section bottom on the
  // grid: the argmin value and its neighbors differ by exactly that scale, so
  // genuine co-minimizers cannot be separated below it.
  double tie_quant = 5.0;
  double match_cells = 1.0;    // set matching distance, in cells
  double landing_cells = 3.0;  // backward-flow landing tolerance, in cells
  double concavity_gate = 0.02;
  TableOptions table;
};

struct CoincidenceReport {
  std::vector<std::size_t> sing;    // kinks of psi
  std::vector<std::size_t> sing_c;  // multi-valued superdifferential nodes
  bool coincide = false;            // sets equal up to match_cells both ways
  std::size_t unmatched = 0;
  double max_pairing_cells = 0.0;   // kink covectors flowed back vs members
  bool pairing_ok = true;
  double clax_eps = 0.0;
};

// Short horizons: the two singular sets agree cell-for-cell, and each extreme
// kink covector flows back onto a superdifferential member.
CoincidenceReport short_time_coincidence(const LagrangianModel& m, const Potential& psi,
                                         const TorusGrid& grid, double t1, double t2,
                                         const RegimeOptions& opts = {});

struct InclusionReport {
  std::vector<std::size_t> sing;
  std::vector<std::size_t> sing_c;
  bool included = false;      // no multi-valued node contradicts the kink evidence
  std::size_t unmatched = 0;  // set-matching diagnostic only (resolution-limited)
  std::size_t violations = 0; // multi-valued nodes whose derivative jump falls short
  double min_margin = 0.0;    // worst surplus of measured jump over required gap
  double max_landing_cells = 0.0;  // reachable gradients flowed back vs members
  bool map_ok = true;
  double clax_eps = 0.0;
};

// Arbitrary horizons: a multi-valued superdifferential node must still be a
// kink (one-sided inclusion), and reachable gradients flow back near
// superdifferential members.  Thresholded set matching cannot compare the two
// detectors at finite spacing -- a kink falling mid-cell splits its slope
// jump across two nodes and drops below either threshold -- so the inclusion
// is checked quantitatively: at every flagged node the measured one-sided
// derivative jump of psi must reach half the covector gap spanned by its
// members, minus an O(spacing) chord-error slack.  The landing check is only
// meaningful while the backward flow is not exponentially unstable over the
// horizon.
InclusionReport long_time_inclusion(const LagrangianModel& m, const Potential& psi,
                                    const TorusGrid& grid, double t1, double t2,
                                    const RegimeOptions& opts = {});

}  // namespace wkot
