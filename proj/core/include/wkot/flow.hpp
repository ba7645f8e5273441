#pragma once

// Symplectic integration of the mechanical Hamiltonian flow on the 1-D torus.
// The base step is velocity-Verlet; full steps use the 4th-order Yoshida
// composition of three Verlet substeps, which keeps both the energy drift and
// the dt-refinement self-error of unit-time orbits well below 1e-6 at
// dt = 1e-3.

#include "wkot/model.hpp"

#include <vector>

namespace wkot {

struct PhasePoint {
  double x = 0.0;   // wrapped to [0,1)
  double p = 0.0;   // momentum = velocity for mechanical models
};

// Orbit samples at uniform step boundaries; positions are unwrapped so that
// endpoint maps and winding are well defined.
struct Orbit {
  std::vector<double> t;
  std::vector<double> x;   // unwrapped
  std::vector<double> v;
  double action = 0.0;     // trapezoid of L(x,v) over the samples

  std::size_t steps() const { return t.empty() ? 0 : t.size() - 1; }
};

double energy(const LagrangianModel& m, const PhasePoint& s);

// One Yoshida-composed step of size h (h may be negative).
void yoshida4_step(const LagrangianModel& m, double& x, double& v, double h);

// Integrates from t1 to t2 (either order); dt is the unsigned target step.
// Returns the final state with x wrapped; fills *orbit (unwrapped) when given.
// Throws IntegrationError if the state becomes non-finite.
PhasePoint hamiltonian_flow(const LagrangianModel& m, const PhasePoint& start,
                            double t1, double t2, double dt, Orbit* orbit = nullptr);

// Internal form used by the shooting solver: unwrapped, duration-signed.
struct RawEndpoint {
  double x;        // unwrapped final position
  double v;        // final velocity
  double action;   // accumulated action
};
RawEndpoint integrate_unwrapped(const LagrangianModel& m, double x0, double v0,
                                double duration, double dt, Orbit* orbit = nullptr);

}  // namespace wkot
