#pragma once

// Mechanical Lagrangians L(x,v) = |v|^2/2 - V(x) on the unit torus, with the
// closed-form potentials used throughout: V = 0, V = A cos(2 pi x) (pendulum
// family) and its shifted variant.  The Legendre transform is the identity
// (p = v), so the Hamiltonian is H(x,p) = |p|^2/2 + V(x).

#include "wkot/common.hpp"

#include <string>

namespace wkot {

enum class PotentialKind { zero, cosine, shifted_cosine };

struct LagrangianModel {
  PotentialKind kind = PotentialKind::zero;
  double amplitude = 1.0;   // A in A cos(2 pi x); ignored for kind zero
  double shift = 0.0;       // additive constant (shifted_cosine)
  int dim = 1;              // dynamics are exercised in 1-D; V evaluates in 2-D too

  double V(double x, double y = 0.0) const;
  double dVdx(double x, double y = 0.0) const;
  double dVdy(double x, double y = 0.0) const;

  double lagrangian(double x, double v) const { return 0.5 * v * v - V(x); }
  double hamiltonian(double x, double p) const { return 0.5 * p * p + V(x); }

  double max_V() const;
  double min_V() const;
  double osc_V() const { return max_V() - min_V(); }

  // max V: the energy level normalizing long-time action growth for
  // mechanical models.
  double critical_value() const { return max_V(); }

  // Upper bound on |V''|; controls the sensitivity e^{sqrt(|V''|) t} of the
  // endpoint map and hence how long a horizon direct shooting can resolve.
  double curvature_bound() const;

  // Largest time window the shooting solver handles in one piece; longer
  // horizons are reached by composing tables.
  double shoot_horizon() const;

  std::string kind_name() const;

  static LagrangianModel free_model();
  static LagrangianModel pendulum(double amplitude = 1.0);
  static LagrangianModel make(const std::string& kind_name, double amplitude = 1.0,
                              double shift = 0.0);
};

}  // namespace wkot
