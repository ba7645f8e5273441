#pragma once

// Constructions of optimal first marginals against a Dirac (or finitely
// supported) terminal measure: backward Hamiltonian flow of terminal
// covectors, the inverse covector recovery, finite mixtures, and the net
// approximation scheme for general terminal marginals.

#include "wkot/common.hpp"
#include "wkot/fundamental.hpp"
#include "wkot/kantorovich.hpp"
#include "wkot/model.hpp"
#include "wkot/semiconcave.hpp"
#include "wkot/space.hpp"

#include <cstddef>
#include <vector>

namespace wkot {

struct CovectorMeasure {
  std::vector<double> p;  // covectors
  std::vector<double> w;  // weights, nonnegative, summing to 1
};

struct DiracOptions {
  double dt = 1e-3;
  // Covector membership pad; negative = spacing * (1 + curvature estimate).
  double covector_pad = -1.0;
  double round_trip_cells = 1.5;
  TableOptions table;
};

struct DiracConstruction {
  ProbMeasure mu{std::vector<double>{1.0}};  // grid measure of backward-flow feet
  std::vector<double> feet;   // continuum landing positions (wrapped)
  double snap_dist = 0.0;     // worst distance from a foot to its grid node
  bool certified = false;     // one-potential condition for (mu, delta_{y0})
  double cert_slack = 0.0;
  double eps_used = 0.0;
  Potential psi;              // evolved potential used for the certificate
};

// Flows each terminal covector of rho backward from y0 over horizon t and
// pushes the weights onto the landing grid cells.  Requires supp(rho) to lie
// near the reachable-gradient samples of the evolved potential at y0.
DiracConstruction dirac_construction(const LagrangianModel& m, const Potential& phi,
                                     const TorusGrid& grid, std::size_t y0, double t,
                                     const CovectorMeasure& rho,
                                     const DiracOptions& opts = {});

struct CovectorRecovery {
  CovectorMeasure rho;
  std::vector<double> hull;      // superdifferential interval at y0
  double max_hull_excess = 0.0;  // distance of recovered covectors beyond it
  double pad_used = 0.0;         // hull tolerance actually applied
  double round_trip_cells = 0.0;
  bool round_trip_ok = false;
};

// Inverse construction: forward-shoots each support atom of mu onto y0,
// collects terminal covectors (they must land inside the superdifferential
// hull up to the pad), and checks that rebuilding from them reproduces the
// support of mu within one cell.  The pad is inflated by the snap
// amplification (spacing / 2t, times the flow sensitivity over the horizon):
// shooting from a grid node rather than the exact foot perturbs the arrival
// velocity at exactly that rate.
CovectorRecovery recover_covector_measure(const LagrangianModel& m, const Potential& phi,
                                          const TorusGrid& grid, std::size_t y0, double t,
                                          const ProbMeasure& mu,
                                          const DiracOptions& opts = {});

struct MixtureComponent {
  std::size_t y = 0;
  double weight = 0.0;
  DiracConstruction part;
};

struct MixtureConstruction {
  ProbMeasure mu{std::vector<double>{1.0}};
  ProbMeasure nu{std::vector<double>{1.0}};
  std::vector<MixtureComponent> components;
  double evolved_side = 0.0;  // ∫ T-phi dnu
  double plan_side = 0.0;     // ∫ phi dmu + C(mu, nu)
  bool certified = false;
};

// Mixes per-target constructions with the given weights; the mixture then
// solves the one-potential problem for the mixed terminal measure.  Default
// covector measures put uniform weight on the reachable-gradient samples.
MixtureConstruction finite_mixture_construction(const LagrangianModel& m, const Potential& phi,
                                                const TorusGrid& grid,
                                                const std::vector<std::size_t>& targets,
                                                const std::vector<double>& lambda, double t,
                                                const DiracOptions& opts = {});

struct NetStage {
  int n = 0;
  std::vector<std::size_t> net;  // 1/n-net of supp(nu), as grid nodes
  ProbMeasure nu_n{std::vector<double>{1.0}};  // rational reweighting on the net
  ProbMeasure mu_n{std::vector<double>{1.0}};
  double w1 = 0.0;      // W1(nu_n, nu)
  double value = 0.0;   // ∫ T-phi dnu_n
  bool certified = false;
  bool membership_ok = false;  // final support meets the subdifferential of
                               // phi inside this stage's net
};

struct NetReport {
  std::vector<NetStage> stages;
  double final_value = 0.0;
  double last_value_change = 0.0;
  bool w1_ok = false;  // W1(nu_n, nu) <= 2/n at every stage
};

// Approximates a general terminal measure along a schedule of 1/n-nets:
// greedy net over supp(nu), nearest-net-point partition weights rounded to
// denominator 16 n^2, then the mixture construction per stage.
NetReport net_approximation(const LagrangianModel& m, const Potential& phi,
                            const TorusGrid& grid, const ProbMeasure& nu, double t,
                            const std::vector<int>& schedule,
                            const DiracOptions& opts = {});

}  // namespace wkot
