#include "wkot/flow.hpp"

#include "wkot/space.hpp"

#include <cmath>

namespace wkot {

namespace {

// Yoshida composition weights: w1, w0, w1 with w1 = 1/(2 - 2^(1/3)).
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = 1.0 - 2.0 * kW1;

inline void verlet(const LagrangianModel& m, double& x, double& v, double h) {
  v += 0.5 * h * (-m.dVdx(x));
  x += h * v;
  v += 0.5 * h * (-m.dVdx(x));
}

}  // namespace

double energy(const LagrangianModel& m, const PhasePoint& s) {
  return m.hamiltonian(s.x, s.p);
}

void yoshida4_step(const LagrangianModel& m, double& x, double& v, double h) {
  verlet(m, x, v, kW1 * h);
  verlet(m, x, v, kW0 * h);
  verlet(m, x, v, kW1 * h);
}

RawEndpoint integrate_unwrapped(const LagrangianModel& m, double x0, double v0,
                                double duration, double dt, Orbit* orbit) {
  if (dt <= 0) throw DomainError("integrate_unwrapped: dt must be positive");
  const long n = std::max<long>(1, std::lround(std::ceil(std::abs(duration) / dt - 1e-12)));
  const double h = duration / double(n);
  double x = x0, v = v0;
  double action = 0.0;
  double l_prev = m.lagrangian(x, v);
  if (orbit) {
    orbit->t.assign(1, 0.0);
    orbit->x.assign(1, x);
    orbit->v.assign(1, v);
    orbit->t.reserve(n + 1);
    orbit->x.reserve(n + 1);
    orbit->v.reserve(n + 1);
  }
  for (long k = 0; k < n; ++k) {
    yoshida4_step(m, x, v, h);
    const double l_here = m.lagrangian(x, v);
    action += 0.5 * h * (l_prev + l_here);
    l_prev = l_here;
    if (orbit) {
      orbit->t.push_back((k + 1) * h);
      orbit->x.push_back(x);
      orbit->v.push_back(v);
    }
  }
  if (!std::isfinite(x) || !std::isfinite(v) || !std::isfinite(action))
    throw IntegrationError("trajectory became non-finite");
  if (orbit) orbit->action = action;
  return RawEndpoint{x, v, action};
}

PhasePoint hamiltonian_flow(const LagrangianModel& m, const PhasePoint& start,
                            double t1, double t2, double dt, Orbit* orbit) {
  RawEndpoint e = integrate_unwrapped(m, start.x, start.p, t2 - t1, dt, orbit);
  if (orbit)
    for (double& tt : orbit->t) tt += t1;
  return PhasePoint{wrap_unit(e.x), e.v};
}

}  // namespace wkot
