#include "wkot/dirac.hpp"

#include "wkot/clax.hpp"
#include "wkot/flow.hpp"
#include "wkot/mincost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace wkot {

namespace {

void check_covector_measure(const CovectorMeasure& rho) {
  if (rho.p.empty() || rho.p.size() != rho.w.size())
    throw DomainError("covector measure: empty or mismatched p/w");
  double acc = 0.0;
  for (double w : rho.w) {
    if (!(w >= -1e-15)) throw DomainError("covector measure: negative weight");
    acc += w;
  }
  if (std::abs(acc - 1.0) > 1e-9) throw DomainError("covector measure: weights must sum to 1");
  for (double p : rho.p)
    if (!std::isfinite(p)) throw DomainError("covector measure: non-finite covector");
}

double membership_pad(const TorusGrid& grid, const Potential& psi, double requested) {
  if (requested >= 0.0) return requested;
  // One-sided difference quotients carry an O(spacing * curvature) error, so
  // the pad scales the same way.
  return grid.spacing() * (1.0 + estimate_semiconcavity(psi, grid));
}

// Slope scale of x -> phi(x) + c(x, y0); controls how fast the support
// identity can degrade under a positional perturbation of the feet.
double section_slope_scale(const Potential& phi, const CostTable& c, std::size_t y0,
                           const TorusGrid& grid) {
  double lip = 0.0;
  const double dx = grid.spacing();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j : grid.neighbors(i)) {
      double fi = phi[i] + c(i, y0);
      double fj = phi[j] + c(j, y0);
      lip = std::max(lip, std::abs(fi - fj) / dx);
    }
  }
  return lip;
}

DiracConstruction construct_with_table(const LagrangianModel& m, const Potential& phi,
                                       const TorusGrid& grid, std::size_t y0, double t,
                                       const CovectorMeasure& rho, const DiracOptions& opts,
                                       const CostTable& c, const Potential& psi) {
  check_covector_measure(rho);

  SuperdiffEstimate est = superdifferential(psi, grid, y0);
  const double pad = membership_pad(grid, psi, opts.covector_pad);
  for (double p : rho.p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : est.d_star) best = std::min(best, std::abs(p - s[0]));
    if (best > pad)
      throw DomainError("dirac construction: covector " + num17(p) +
                        " is not a reachable gradient of the evolved potential (pad " +
                        num17(pad) + ")");
  }

  DiracConstruction out;
  out.psi = psi;
  std::vector<double> w(grid.size(), 0.0);
  const double y0x = grid.point(y0)[0];
  for (std::size_t i = 0; i < rho.p.size(); ++i) {
    RawEndpoint e = integrate_unwrapped(m, y0x, rho.p[i], -t, opts.dt);
    double foot = wrap_unit(e.x);
    out.feet.push_back(foot);
    std::size_t node = grid.nearest_node(foot);
    out.snap_dist =
        std::max(out.snap_dist, std::abs(signed_diff(foot, grid.point(node)[0])));
    w[node] += rho.w[i];
  }
  out.mu = ProbMeasure(std::move(w));

  // Feet were snapped to nodes and the covectors themselves carry an O(pad)
  // sampling error, so the support identity is tested with a slack inflated by
  // the section's slope times the total positional budget.
  const double lip = section_slope_scale(phi, c, y0, grid);
  out.eps_used = arg_tolerance(c) + lip * (out.snap_dist + 2.0 * grid.spacing());
  DiracCondition cond = dirac_support_condition(phi, out.mu, y0, c, out.eps_used);
  out.certified = cond.ok;
  out.cert_slack = cond.worst_slack;
  return out;
}

struct Prepared {
  FundamentalTable table;
  CostTable c;
  Potential psi;
};

Prepared prepare(const LagrangianModel& m, const Potential& phi, const TorusGrid& grid,
                 double t, const DiracOptions& opts) {
  if (grid.dim != 1) throw DomainError("dirac constructions: dynamics are 1-d");
  if (phi.size() != grid.size()) throw DomainError("dirac constructions: potential/grid size");
  if (!(t > 0.0)) throw DomainError("dirac constructions: horizon must be positive");
  FundamentalTable tab = build_fundamental_table(m, grid, 0.0, t, opts.table);
  CostTable c(tab.h);
  Potential psi = t_minus(phi, c);
  return Prepared{std::move(tab), std::move(c), std::move(psi)};
}

// Uniform measure on the deduplicated reachable-gradient samples; the default
// terminal covector choice for mixture components.
CovectorMeasure default_covectors(const SuperdiffEstimate& est) {
  std::vector<double> ps;
  for (const auto& s : est.d_star) {
    bool dup = false;
    for (double q : ps) dup = dup || std::abs(q - s[0]) <= 1e-12;
    if (!dup) ps.push_back(s[0]);
  }
  CovectorMeasure rho;
  rho.p = ps;
  rho.w.assign(ps.size(), 1.0 / double(ps.size()));
  return rho;
}

MixtureConstruction mixture_with_table(const LagrangianModel& m, const Potential& phi,
                                       const TorusGrid& grid,
                                       const std::vector<std::size_t>& targets,
                                       const std::vector<double>& lambda, double t,
                                       const DiracOptions& opts, const CostTable& c,
                                       const Potential& psi) {
  if (targets.empty() || targets.size() != lambda.size())
    throw DomainError("mixture: empty or mismatched targets/weights");
  double acc = 0.0;
  for (double l : lambda) {
    if (!(l >= -1e-15)) throw DomainError("mixture: negative weight");
    acc += l;
  }
  if (std::abs(acc - 1.0) > 1e-9) throw DomainError("mixture: weights must sum to 1");

  MixtureConstruction out;
  std::vector<double> mu_w(grid.size(), 0.0);
  std::vector<double> nu_w(grid.size(), 0.0);
  double worst_eps = 0.0;
  bool parts_ok = true;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= grid.size()) throw DomainError("mixture: target out of range");
    if (lambda[i] <= 0.0) continue;
    CovectorMeasure rho = default_covectors(superdifferential(psi, grid, targets[i]));
    DiracConstruction part =
        construct_with_table(m, phi, grid, targets[i], t, rho, opts, c, psi);
    parts_ok = parts_ok && part.certified;
    worst_eps = std::max(worst_eps, part.eps_used);
    for (std::size_t j = 0; j < grid.size(); ++j) mu_w[j] += lambda[i] * part.mu[j];
    nu_w[targets[i]] += lambda[i];
    out.components.push_back({targets[i], lambda[i], std::move(part)});
  }
  out.mu = ProbMeasure(std::move(mu_w));
  out.nu = ProbMeasure(std::move(nu_w));

  KantorovichResult lp = solve_kantorovich(out.mu, out.nu, c);
  out.evolved_side = integrate(psi, out.nu);
  out.plan_side = integrate(phi, out.mu) + lp.value;
  // The evolved side never exceeds the plan side (duality); equality up to the
  // per-component slack certifies the mixture.
  out.certified = parts_ok && lp.certified &&
                  std::abs(out.evolved_side - out.plan_side) <=
                      worst_eps + arg_tolerance(c) + 1e-12;
  return out;
}

}  // namespace

DiracConstruction dirac_construction(const LagrangianModel& m, const Potential& phi,
                                     const TorusGrid& grid, std::size_t y0, double t,
                                     const CovectorMeasure& rho, const DiracOptions& opts) {
  if (y0 >= grid.size()) throw DomainError("dirac construction: target out of range");
  Prepared pre = prepare(m, phi, grid, t, opts);
  return construct_with_table(m, phi, grid, y0, t, rho, opts, pre.c, pre.psi);
}

CovectorRecovery recover_covector_measure(const LagrangianModel& m, const Potential& phi,
                                          const TorusGrid& grid, std::size_t y0, double t,
                                          const ProbMeasure& mu, const DiracOptions& opts) {
  if (y0 >= grid.size()) throw DomainError("covector recovery: target out of range");
  if (mu.size() != grid.size()) throw DomainError("covector recovery: measure/grid size");
  Prepared pre = prepare(m, phi, grid, t, opts);

  SuperdiffEstimate est = superdifferential(pre.psi, grid, y0);
  double lo = est.hull.front()[0], hi = lo;
  for (const auto& h : est.hull) {
    lo = std::min(lo, h[0]);
    hi = std::max(hi, h[0]);
  }
  // The support atoms are grid nodes, displaced from the exact minimizing
  // feet by up to half a cell plus the construction snap; the two-point
  // arrival velocity responds at rate 1/t, amplified by the flow sensitivity.
  const double snap_amp = 0.5 * grid.spacing() / t *
                          std::exp(std::sqrt(m.curvature_bound()) * t);
  const double pad =
      membership_pad(grid, pre.psi, opts.covector_pad) + snap_amp;

  CovectorRecovery out;
  out.hull = {lo, hi};
  out.pad_used = pad;
  const double y0x = grid.point(y0)[0];
  for (std::size_t x : mu.support()) {
    ShootSolution sol =
        fundamental_solution(m, 0.0, t, grid.point(x)[0], y0x, opts.table.shoot, false);
    double p = sol.v_end;
    double excess = std::max({lo - p, p - hi, 0.0});
    out.max_hull_excess = std::max(out.max_hull_excess, excess);
    if (excess > pad)
      throw SolverError("covector recovery: terminal covector " + num17(p) +
                        " leaves the superdifferential hull [" + num17(lo) + ", " +
                        num17(hi) + "] by " + num17(excess) + " (pad " + num17(pad) + ")");
    out.rho.p.push_back(p);
    out.rho.w.push_back(mu[x]);
  }

  // The rebuild must admit the recovered covectors under the same pad.
  DiracOptions ropts = opts;
  ropts.covector_pad = pad;
  DiracConstruction back =
      construct_with_table(m, phi, grid, y0, t, out.rho, ropts, pre.c, pre.psi);
  double worst = 0.0;
  for (std::size_t x : mu.support()) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s : back.mu.support()) best = std::min(best, grid.distance(x, s));
    worst = std::max(worst, best);
  }
  out.round_trip_cells = worst / grid.spacing();
  out.round_trip_ok = out.round_trip_cells <= opts.round_trip_cells + 1e-9;
  return out;
}

MixtureConstruction finite_mixture_construction(const LagrangianModel& m, const Potential& phi,
                                                const TorusGrid& grid,
                                                const std::vector<std::size_t>& targets,
                                                const std::vector<double>& lambda, double t,
                                                const DiracOptions& opts) {
  Prepared pre = prepare(m, phi, grid, t, opts);
  return mixture_with_table(m, phi, grid, targets, lambda, t, opts, pre.c, pre.psi);
}

NetReport net_approximation(const LagrangianModel& m, const Potential& phi,
                            const TorusGrid& grid, const ProbMeasure& nu, double t,
                            const std::vector<int>& schedule, const DiracOptions& opts) {
  if (nu.size() != grid.size()) throw DomainError("net approximation: measure/grid size");
  if (schedule.empty()) throw DomainError("net approximation: empty schedule");
  for (int n : schedule)
    if (n < 2) throw DomainError("net approximation: schedule entries must be >= 2");

  Prepared pre = prepare(m, phi, grid, t, opts);
  const CostTable dist(grid.metric_table());
  const std::vector<std::size_t> supp = nu.support();

  NetReport out;
  for (int n : schedule) {
    NetStage stage;
    stage.n = n;
    const double radius = 1.0 / n;

    // Greedy maximal separated subset: every support atom ends up within
    // `radius` of some net point, and the scan order makes it deterministic.
    for (std::size_t s : supp) {
      bool covered = false;
      for (std::size_t c0 : stage.net)
        covered = covered || grid.distance(s, c0) <= radius + 1e-15;
      if (!covered) stage.net.push_back(s);
    }

    // Nearest-net-point partition of the support mass, then rounding to
    // rationals with denominator 16 n^2 by largest remainder.
    std::vector<double> cell(stage.net.size(), 0.0);
    for (std::size_t s : supp) {
      std::size_t best = 0;
      double bd = grid.distance(s, stage.net[0]);
      for (std::size_t k = 1; k < stage.net.size(); ++k) {
        double d = grid.distance(s, stage.net[k]);
        if (d < bd - 1e-15) {
          bd = d;
          best = k;
        }
      }
      cell[best] += nu[s];
    }
    const long long denom = 16LL * n * n;
    std::vector<long long> units = largest_remainder_scale(cell, denom);

    std::vector<double> wn(grid.size(), 0.0);
    std::vector<std::size_t> targets;
    std::vector<double> lams;
    for (std::size_t k = 0; k < stage.net.size(); ++k) {
      if (units[k] == 0) continue;
      double r = double(units[k]) / double(denom);
      wn[stage.net[k]] += r;
      targets.push_back(stage.net[k]);
      lams.push_back(r);
    }
    stage.nu_n = ProbMeasure(std::move(wn));

    KantorovichResult w1 = solve_kantorovich(stage.nu_n, nu, dist);
    stage.w1 = w1.value;

    MixtureConstruction mix =
        mixture_with_table(m, phi, grid, targets, lams, t, opts, pre.c, pre.psi);
    stage.mu_n = mix.mu;
    stage.value = mix.evolved_side;
    stage.certified = mix.certified;

    // Every optimal atom must see some net point inside the subdifferential of
    // the starting potential, up to the same slack that certified the parts.
    double eps_mem = arg_tolerance(pre.c);
    for (const auto& comp : mix.components)
      eps_mem = std::max(eps_mem, comp.part.eps_used);
    stage.membership_ok = true;
    for (std::size_t x : mix.mu.support()) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t y : targets)
        best = std::min(best, phi[x] + pre.c(x, y) - pre.psi[y]);
      stage.membership_ok = stage.membership_ok && best <= eps_mem;
    }

    out.stages.push_back(std::move(stage));
  }

  out.w1_ok = true;
  for (const NetStage& s : out.stages)
    out.w1_ok = out.w1_ok && s.w1 <= 2.0 / s.n + 1e-12;
  out.final_value = out.stages.back().value;
  out.last_value_change =
      out.stages.size() >= 2
          ? std::abs(out.stages.back().value - out.stages[out.stages.size() - 2].value)
          : 0.0;
  return out;
}

}  // namespace wkot
