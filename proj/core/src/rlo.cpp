#include "wkot/rlo.hpp"

#include "wkot/clax.hpp"
#include "wkot/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace wkot {

namespace {

constexpr double kHalf = 0.5;  // covering radius of the unit torus

ProbMeasure endpoint_law(const PathEnsemble& ens, const TorusGrid& grid, bool start) {
  std::vector<double> w(grid.size(), 0.0);
  for (const PathCurve& c : ens.curves) {
    double pos = wrap_unit(start ? c.orbit.x.front() : c.orbit.x.back());
    w[grid.nearest_node(pos)] += c.weight;
  }
  return ProbMeasure(std::move(w));
}

double measure_gap(const ProbMeasure& a, const ProbMeasure& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

void finalize_ensemble(PathEnsemble& ens, const TorusGrid& grid, const Matrix& h,
                       const ProbMeasure& mu, const ProbMeasure& nu, double action_tol) {
  ens.law_start = endpoint_law(ens, grid, true);
  ens.law_end = endpoint_law(ens, grid, false);
  ens.max_action_defect = 0.0;
  for (const PathCurve& c : ens.curves)
    ens.max_action_defect =
        std::max(ens.max_action_defect, std::abs(c.action - h(c.from, c.to)));
  ens.certified = measure_gap(ens.law_start, mu) <= 1e-10 &&
                  measure_gap(ens.law_end, nu) <= 1e-10 &&
                  ens.max_action_defect <= action_tol;
}

// Trapezoid of the slice Lagrangian over the shared time partition.  Equals
// the weighted per-curve action sum by linearity, but is computed slice-first.
double slice_integral(const LagrangianModel& m, const PathEnsemble& ens) {
  if (ens.curves.empty()) return 0.0;
  const std::size_t K = ens.curves.front().orbit.t.size();
  for (const PathCurve& c : ens.curves)
    if (c.orbit.t.size() != K)
      throw SolverError("slice integral: curves do not share a time partition");
  if (K < 2) return 0.0;
  const double h = ens.curves.front().orbit.t[1] - ens.curves.front().orbit.t[0];
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    double lag = 0.0;
    for (const PathCurve& c : ens.curves)
      lag += c.weight * m.lagrangian(c.orbit.x[k], c.orbit.v[k]);
    if (k > 0) acc += 0.5 * h * (prev + lag);
    prev = lag;
  }
  return acc;
}

void check_dim(const TorusGrid& grid, const char* who) {
  if (grid.dim != 1) throw DomainError(std::string(who) + ": dynamics are 1-d");
}

}  // namespace

double wasserstein_p(const ProbMeasure& mu, const ProbMeasure& nu, const Matrix& metric,
                     int p) {
  if (p != 1 && p != 2) throw DomainError("wasserstein_p: p must be 1 or 2");
  if (metric.rows != mu.size() || metric.cols != nu.size())
    throw DomainError("wasserstein_p: metric shape does not match the measures");
  Matrix cp = metric;
  if (p == 2)
    for (double& v : cp.data) v *= v;
  double value = solve_kantorovich(mu, nu, CostTable(std::move(cp))).value;
  return p == 1 ? value : std::sqrt(std::max(value, 0.0));
}

LipLargeCert lip_in_large_check(const Potential& phi, double k1, double k2,
                                const Matrix& metric) {
  if (k1 < 0 || k2 < 0) throw DomainError("lip_in_large_check: constants must be >= 0");
  if (metric.rows != phi.size() || metric.cols != phi.size())
    throw DomainError("lip_in_large_check: metric shape");
  LipLargeCert cert;
  cert.k1 = k1;
  cert.k2 = k2;
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (std::size_t j = 0; j < phi.size(); ++j) {
      if (i == j) continue;
      double excess = std::abs(phi[i] - phi[j]) - k1 * metric(i, j) - k2;
      cert.worst_excess = std::max(cert.worst_excess, excess);
      if (excess > 1e-12) ++cert.violations;
    }
  cert.certified = cert.violations == 0;
  return cert;
}

SliceMeasure PathEnsemble::slice(double s) const {
  SliceMeasure out;
  out.s = s;
  for (const PathCurve& c : curves) {
    const auto& ts = c.orbit.t;  // relative to t1
    long k = 0;
    if (ts.size() > 1) {
      double step = ts[1] - ts[0];
      k = std::lround((s - t1) / step);
      k = std::clamp<long>(k, 0, long(ts.size()) - 1);
    }
    out.x.push_back(wrap_unit(c.orbit.x[std::size_t(k)]));
    out.v.push_back(c.orbit.v[std::size_t(k)]);
    out.w.push_back(c.weight);
  }
  return out;
}

DynamicalCost dynamical_cost(const LagrangianModel& m, const ProbMeasure& mu,
                             const ProbMeasure& nu, const TorusGrid& grid, double s,
                             double t, const RloOptions& opts) {
  check_dim(grid, "dynamical_cost");
  if (!(t > s)) throw DomainError("dynamical_cost: need t > s");
  if (mu.size() != grid.size() || nu.size() != grid.size())
    throw DomainError("dynamical_cost: measure/grid size");

  FundamentalTable tab = build_fundamental_table(m, grid, s, t, opts.table);
  KantorovichResult lp = solve_kantorovich(mu, nu, CostTable(tab.h));

  DynamicalCost out;
  out.value = lp.value;
  out.plan = lp.plan;
  out.ensemble.t1 = s;
  out.ensemble.t2 = t;

  // Minimizing curves come from direct shooting, which is only reliable below
  // the model's single-shot horizon; beyond it the value stands on the
  // composed table and the ensemble is left empty (and uncertified).
  if (t - s <= m.shoot_horizon() * (1.0 + 1e-9)) {
    for (auto [i, j] : lp.plan.support()) {
      ShootSolution sol = fundamental_solution(m, s, t, grid.point(i)[0],
                                               grid.point(j)[0], opts.table.shoot, true);
      out.ensemble.curves.push_back(
          PathCurve{i, j, lp.plan(i, j), sol.value, std::move(sol.orbit)});
    }
    finalize_ensemble(out.ensemble, grid, tab.h, mu, nu, opts.agree_tol);
    out.curve_side = 0.0;
    for (const PathCurve& c : out.ensemble.curves) out.curve_side += c.weight * c.action;
    out.two_forms_gap = std::abs(out.value - out.curve_side);
    out.consistent = lp.certified && out.ensemble.certified &&
                     out.two_forms_gap <= opts.agree_tol;
  } else {
    out.curve_side = out.value;
    out.two_forms_gap = 0.0;
    out.consistent = lp.certified;
  }
  return out;
}

namespace {

// Shared engine for the two lifted operators.  `minus` localizes the inner
// optimization around each atom of the fixed marginal and certifies the
// result against the pointwise evolution.
LiftedResult lifted_operator(const LagrangianModel& m, const Potential& phi,
                             const ProbMeasure& fixed, const TorusGrid& grid, double t,
                             const RloOptions& opts, bool minus) {
  const char* who = minus ? "p_minus" : "p_plus";
  check_dim(grid, who);
  if (phi.size() != grid.size() || fixed.size() != grid.size())
    throw DomainError(std::string(who) + ": potential/measure/grid size");
  if (!(t > 0.0)) throw DomainError(std::string(who) + ": horizon must be positive");
  if (t > m.shoot_horizon() * (1.0 + 1e-9))
    throw SolverError(std::string(who) +
                      ": horizon exceeds the single-shot window; curves would be "
                      "unreliable");

  FundamentalTable tab = build_fundamental_table(m, grid, 0.0, t, opts.table);
  const CostTable c(tab.h);
  const double eps = arg_tolerance(c);

  LiftedResult out;
  out.evolved = minus ? t_minus(phi, c) : t_plus(phi, c);
  out.value = integrate(out.evolved, fixed);

  // Localization speed bound from the energy budget: the potential ceiling
  // plus the per-unit-time action the potential term can pay for, with a
  // safety factor of 2.  A wrong guess is self-correcting below.
  double lam = opts.lambda;
  if (lam < 0.0) {
    double osc_phi = 0.0;
    double lo = phi[0], hi = phi[0];
    for (double v : phi.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    osc_phi = hi - lo;
    double e_level = osc_phi / t + m.max_V();
    lam = 2.0 * std::sqrt(std::max(0.0, 2.0 * (e_level - m.min_V())));
  }

  const std::vector<std::size_t> supp = fixed.support();
  std::vector<long> foot(grid.size(), -1);
  for (int round = 0;; ++round) {
    const double radius = std::min(lam * t, kHalf);
    bool touched = false, mismatch = false;
    for (std::size_t a : supp) {
      double best = minus ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      std::size_t bx = a;
      for (std::size_t x = 0; x < grid.size(); ++x) {
        if (grid.distance(x, a) > radius + 1e-12) continue;
        double val = minus ? phi[x] + c(x, a) : phi[x] - c(a, x);
        if (minus ? val < best : val > best) {
          best = val;
          bx = x;
        }
      }
      foot[a] = long(bx);
      if (std::abs(best - out.evolved[a]) > eps) mismatch = true;
      if (radius < kHalf - 1e-12 && grid.distance(bx, a) > radius - grid.spacing())
        touched = true;
    }
    if (!touched && !mismatch) {
      out.lambda_used = lam;
      out.ball_radius = radius;
      break;
    }
    if (round == 0 && radius < kHalf - 1e-12) {
      lam *= 2.0;
      out.lambda_enlarged = true;
      continue;
    }
    throw SolverError(std::string(who) + (mismatch
                          ? ": localized optimum misses the evolved value"
                          : ": optimizer pinned to the localization boundary") +
                      " after one ball enlargement");
  }
  out.foot = foot;

  std::vector<double> w(grid.size(), 0.0);
  for (std::size_t a : supp) w[std::size_t(foot[a])] += fixed[a];
  out.witness = ProbMeasure(std::move(w));

  out.ensemble.t1 = 0.0;
  out.ensemble.t2 = t;
  for (std::size_t a : supp) {
    std::size_t from = minus ? std::size_t(foot[a]) : a;
    std::size_t to = minus ? a : std::size_t(foot[a]);
    ShootSolution sol = fundamental_solution(m, 0.0, t, grid.point(from)[0],
                                             grid.point(to)[0], opts.table.shoot, true);
    out.ensemble.curves.push_back(PathCurve{from, to, fixed[a], sol.value, std::move(sol.orbit)});
  }
  const ProbMeasure& mu = minus ? out.witness : fixed;
  const ProbMeasure& nu = minus ? fixed : out.witness;
  finalize_ensemble(out.ensemble, grid, tab.h, mu, nu, opts.agree_tol);

  const double transport = solve_kantorovich(mu, nu, c).value;
  double curve_action = 0.0, curve_phi = 0.0;
  for (const PathCurve& cu : out.ensemble.curves) {
    curve_action += cu.weight * cu.action;
    curve_phi += cu.weight * (minus ? phi[cu.from] : phi[cu.to]);
  }
  const double sign = minus ? 1.0 : -1.0;
  out.expr_measure = integrate(phi, out.witness) + sign * transport;
  out.expr_curve = curve_phi + sign * curve_action;
  out.expr_slice = integrate(phi, out.witness) + sign * slice_integral(m, out.ensemble);
  out.max_expr_gap = std::max({std::abs(out.expr_measure - out.value),
                               std::abs(out.expr_curve - out.value),
                               std::abs(out.expr_slice - out.value)});
  out.certified = out.ensemble.certified && out.max_expr_gap <= opts.agree_tol;

  // Sampled competitors can only do worse; a violation beyond 1e-8 would
  // falsify the reduction of the lifted problem to the pointwise evolution.
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  out.competitor_min_excess = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < opts.competitors; ++trial) {
    std::vector<double> cw(grid.size(), 0.0);
    for (std::size_t a : supp) cw[pick(rng)] += fixed[a];
    ProbMeasure other(std::move(cw));
    double obj = minus
                     ? integrate(phi, other) + solve_kantorovich(other, fixed, c).value
                     : integrate(phi, other) - solve_kantorovich(fixed, other, c).value;
    double excess = minus ? obj - out.value : out.value - obj;
    out.competitor_min_excess = std::min(out.competitor_min_excess, excess);
  }
  return out;
}

}  // namespace

LiftedResult p_minus(const LagrangianModel& m, const Potential& phi, const ProbMeasure& nu,
                     const TorusGrid& grid, double t, const RloOptions& opts) {
  return lifted_operator(m, phi, nu, grid, t, opts, true);
}

LiftedResult p_plus(const LagrangianModel& m, const Potential& phi, const ProbMeasure& mu,
                    const TorusGrid& grid, double t, const RloOptions& opts) {
  return lifted_operator(m, phi, mu, grid, t, opts, false);
}

EulerLagrangeReport euler_lagrange_slice_check(const LagrangianModel& m,
                                               const PathEnsemble& ens, int n_slices) {
  EulerLagrangeReport rep;
  for (const PathCurve& c : ens.curves) {
    const auto& v = c.orbit.v;
    const auto& x = c.orbit.x;
    const std::size_t K = v.size();
    double res = 0.0;
    if (K >= 2) {
      const double h = c.orbit.t[1] - c.orbit.t[0];
      if (K >= 5) {
        // Interior 5-point first derivative of the velocity samples; the
        // boundary layer is excluded so the O(h^2) edge stencils do not
        // dominate the genuine residual.
        for (std::size_t k = 2; k + 2 < K; ++k) {
          double dv = (-v[k + 2] + 8.0 * v[k + 1] - 8.0 * v[k - 1] + v[k - 2]) / (12.0 * h);
          res = std::max(res, std::abs(dv + m.dVdx(x[k])));
        }
      } else {
        for (std::size_t k = 1; k + 1 < K; ++k) {
          double dv = (v[k + 1] - v[k - 1]) / (2.0 * h);
          res = std::max(res, std::abs(dv + m.dVdx(x[k])));
        }
      }
    }
    rep.per_curve.push_back(res);
    rep.max_residual = std::max(rep.max_residual, res);
  }

  rep.slices_mass_ok = true;
  for (int j = 1; j <= n_slices; ++j) {
    double s = ens.t1 + (ens.t2 - ens.t1) * double(j) / double(n_slices + 1);
    SliceMeasure sl = ens.slice(s);
    double mass = 0.0;
    for (double w : sl.w) mass += w;
    rep.slices_mass_ok = rep.slices_mass_ok && std::abs(mass - 1.0) <= 1e-12;
    rep.slices.push_back(std::move(sl));
  }
  return rep;
}

}  // namespace wkot
