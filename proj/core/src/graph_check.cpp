#include "wkot/graph_check.hpp"

#include "wkot/clax_core.hpp"
#include "wkot/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wkot {

namespace {

double phase_dist(double x1, double p1, double x2, double p2) {
  return std::hypot(signed_diff(x2, x1), p2 - p1);
}

double cloud_hausdorff(const GraphSnapshot& a, const GraphSnapshot& b) {
  auto directed = [](const GraphSnapshot& s, const GraphSnapshot& t) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < t.x.size(); ++j)
        best = std::min(best, phase_dist(s.x[i], s.p[i], t.x[j], t.p[j]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::vector<double> central_gradient(const std::vector<double>& f, const TorusGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> g(n);
  const double dx = grid.spacing();
  for (std::size_t i = 0; i < n; ++i)
    g[i] = (f[grid.flatten(long(i) + 1, 0)] - f[grid.flatten(long(i) - 1, 0)]) / (2.0 * dx);
  return g;
}

}  // namespace

SmoothProbe smooth_evolution_probe(const LagrangianModel& m, const Potential& phi,
                                   const TorusGrid& grid, double t, const TphiOptions& opts) {
  if (grid.dim != 1) throw DomainError("smooth_evolution_probe: 1-d grids only");
  if (phi.size() != grid.size())
    throw DomainError("smooth_evolution_probe: potential size does not match the grid");
  FundamentalTable tab = build_fundamental_table(m, grid, 0.0, t, opts.table);

  SmoothProbe probe;
  const std::size_t n = grid.size();
  const double scale = 1.0 + max_abs(phi.values) + max_abs(tab.h);
  const double eps_tie = opts.eps_tie > 0 ? opts.eps_tie : 1e-6 * scale;
  const double dx = grid.spacing();

  probe.evolved.resize(n);
  for (std::size_t x = 0; x < n && probe.argmax_unique; ++x) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < n; ++y) best = std::max(best, phi[y] - tab.h(x, y));
    probe.evolved[x] = best;
    // Attainers within the tie window must form one tight cluster.
    std::vector<std::size_t> att;
    for (std::size_t y = 0; y < n; ++y)
      if (phi[y] - tab.h(x, y) >= best - eps_tie) att.push_back(y);
    double span = 0.0;
    for (std::size_t a = 0; a < att.size(); ++a)
      for (std::size_t b = a + 1; b < att.size(); ++b)
        span = std::max(span, grid.distance(att[a], att[b]));
    if (span > 1.5 * dx) {
      probe.argmax_unique = false;
      probe.first_bad = x;
    }
  }
  if (!probe.argmax_unique) {
    probe.smooth = false;
    return probe;
  }
  // Fill the remaining values (loop above stops early only on failure).
  probe.gradient = central_gradient(probe.evolved, grid);
  for (std::size_t i = 0; i < n; ++i) {
    const double jump =
        std::abs(probe.gradient[grid.flatten(long(i) + 1, 0)] - probe.gradient[i]) / dx;
    probe.grad_lip = std::max(probe.grad_lip, jump);
  }
  const double lip_cap = opts.lip_cap > 0 ? opts.lip_cap : 0.25 / dx;
  probe.smooth = probe.grad_lip <= lip_cap;
  return probe;
}

double t_phi_estimate(const LagrangianModel& m, const Potential& phi, const TorusGrid& grid,
                      const TphiOptions& opts) {
  auto passes = [&](double t) { return smooth_evolution_probe(m, phi, grid, t, opts).smooth; };
  if (!passes(opts.t_floor)) return 0.5 * opts.t_floor;
  double lo = opts.t_floor;
  double hi = -1.0;
  for (double t = 2.0 * opts.t_floor; t <= opts.t_cap * (1 + 1e-12); t *= 2.0) {
    if (passes(t)) {
      lo = t;
    } else {
      hi = t;
      break;
    }
  }
  if (hi < 0) {
    // Doubling never failed; try the cap itself.
    if (lo < opts.t_cap && passes(opts.t_cap)) return opts.t_cap;
    if (lo >= opts.t_cap) return opts.t_cap;
    hi = opts.t_cap;
  }
  for (int i = 0; i < opts.bisect_iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return lo;
}

ArnaudReport arnaud_graph_check(const LagrangianModel& m, const Potential& phi,
                                const TorusGrid& grid, double t, double dt) {
  TphiOptions opts;
  opts.table.dt = dt;
  SmoothProbe probe = smooth_evolution_probe(m, phi, grid, t, opts);
  if (!probe.argmax_unique)
    throw DomainError("arnaud_graph_check: horizon lies past the smooth window (node " +
                      std::to_string(probe.first_bad) + ")");

  ArnaudReport rep;
  rep.grad_lip = probe.grad_lip;
  const std::size_t n = grid.size();
  rep.evolved.x.resize(n);
  rep.evolved.p = probe.gradient;
  for (std::size_t i = 0; i < n; ++i) rep.evolved.x[i] = grid.point(i)[0];

  // Independent side: flow the initial gradient graph backward in time.
  std::vector<double> g0 = central_gradient(phi.values, grid);
  rep.flowed.x.resize(n);
  rep.flowed.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    RawEndpoint e = integrate_unwrapped(m, grid.point(i)[0], g0[i], -t, dt, nullptr);
    rep.flowed.x[i] = wrap_unit(e.x);
    rep.flowed.p[i] = e.v;
  }
  rep.hausdorff = cloud_hausdorff(rep.evolved, rep.flowed);
  return rep;
}

namespace {

// Shared core: cost table, concavity gate, scaled tie window, two singular
// sets.
struct RegimeCore {
  CostTable c{Matrix(1, 1)};
  double defect = 0.0;
  double clax_eps = 0.0;
  CSingularReport singc;
  SingSet sing;
};

RegimeCore regime_core(const LagrangianModel& m, const Potential& psi, const TorusGrid& grid,
                       double t1, double t2, const RegimeOptions& opts) {
  RegimeCore core;
  FundamentalTable tab = build_fundamental_table(m, grid, t1, t2, opts.table);
  core.c = CostTable(std::move(tab.h));
  core.defect = max_abs(claxcore::commutator_defect(psi.values, core.c.values));
  if (core.defect > opts.concavity_gate)
    throw DomainError("regime comparison: potential is not c-concave for this cost (defect " +
                      num17(core.defect) + ")");
  // Tie window matched to the section curvature 1/tau: grid quantization of a
  // parabola bottom is spacing^2/(2 tau), and near-ties at that depth spread
  // over a width 2 sqrt(2 tau eps), so the span gate must sit above it or
  // every single-basin argmin cluster reads as a fan.
  const double tau = t2 - t1;
  const double dx = grid.spacing();
  core.clax_eps =
      std::max({opts.clax_eps_floor, opts.tie_quant * dx * dx / (2.0 * tau), 3.0 * core.defect});
  const double gate = std::max(2.5 * dx, dx + 2.0 * std::sqrt(2.0 * tau * core.clax_eps));
  core.singc = sing_c(psi, core.c, &grid, &grid, core.clax_eps, gate);
  core.sing = sing_set(psi, grid);
  return core;
}

// Count members of `from` farther than tol_cells from every member of `to`.
std::size_t unmatched_count(const std::vector<std::size_t>& from,
                            const std::vector<std::size_t>& to, const TorusGrid& grid,
                            double tol_cells) {
  std::size_t bad = 0;
  for (std::size_t a : from) {
    bool hit = false;
    for (std::size_t b : to)
      if (grid.distance(a, b) <= tol_cells * grid.spacing() + 1e-12) {
        hit = true;
        break;
      }
    if (!hit) ++bad;
  }
  return bad;
}

// Flow covectors at node y backward and report the worst landing distance (in
// cells) to the given member set.
double landing_defect_cells(const LagrangianModel& m, const TorusGrid& grid, std::size_t y,
                            const std::vector<double>& covectors,
                            const std::vector<std::size_t>& members, double tau, double dt) {
  if (members.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double p : covectors) {
    RawEndpoint e = integrate_unwrapped(m, grid.point(y)[0], p, -tau, dt, nullptr);
    const double land = wrap_unit(e.x);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x : members)
      best = std::min(best, std::abs(signed_diff(land, grid.point(x)[0])));
    worst = std::max(worst, best / grid.spacing());
  }
  return worst;
}

}  // namespace

CoincidenceReport short_time_coincidence(const LagrangianModel& m, const Potential& psi,
                                         const TorusGrid& grid, double t1, double t2,
                                         const RegimeOptions& opts) {
  const double tau = t2 - t1;
  TphiOptions popt;
  popt.table = opts.table;
  SmoothProbe probe = smooth_evolution_probe(m, psi, grid, tau, popt);
  if (!probe.argmax_unique)
    throw DomainError("short_time_coincidence: horizon lies past the smooth window");

  RegimeCore core = regime_core(m, psi, grid, t1, t2, opts);
  CoincidenceReport rep;
  rep.clax_eps = core.clax_eps;
  rep.sing = core.sing.members;
  rep.sing_c = core.singc.singular;
  rep.unmatched = unmatched_count(rep.sing, rep.sing_c, grid, opts.match_cells) +
                  unmatched_count(rep.sing_c, rep.sing, grid, opts.match_cells);
  rep.coincide = rep.unmatched == 0;

  // Extreme kink covectors must flow back onto superdifferential members.
  for (std::size_t y : rep.sing) {
    const auto& est = core.sing.estimates[y];
    std::vector<double> covs;
    for (const auto& g : est.d_star) covs.push_back(g[0]);
    const double cells = landing_defect_cells(m, grid, y, covs, core.singc.superdiff[y], tau,
                                              opts.table.dt);
    rep.max_pairing_cells = std::max(rep.max_pairing_cells, cells);
  }
  rep.pairing_ok = rep.max_pairing_cells <= opts.landing_cells;
  return rep;
}

InclusionReport long_time_inclusion(const LagrangianModel& m, const Potential& psi,
                                    const TorusGrid& grid, double t1, double t2,
                                    const RegimeOptions& opts) {
  RegimeCore core = regime_core(m, psi, grid, t1, t2, opts);
  InclusionReport rep;
  rep.clax_eps = core.clax_eps;
  rep.sing = core.sing.members;
  rep.sing_c = core.singc.singular;
  rep.unmatched = unmatched_count(rep.sing_c, rep.sing, grid, opts.match_cells);

  const double tau = t2 - t1;
  const double dx = grid.spacing();
  auto at = [&](long i) { return psi.values[grid.flatten(i, 0)]; };
  // Wide-stencil one-sided slopes: chords over [y-3, y-1] and [y+1, y+3] stay
  // clear of a kink sitting anywhere in (y-1, y+1), so their difference reads
  // the full jump wherever the kink falls inside the cell.  The price is a
  // chord error of order curvature * spacing, absorbed into the slack.
  const double slack = 4.0 * dx * (core.sing.constant + 1.0 / tau);
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t y : rep.sing_c) {
    const auto& members =
        core.singc.reachable[y].empty() ? core.singc.superdiff[y] : core.singc.reachable[y];
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t x : members) {
      const double dyc = (core.c.values(x, grid.flatten(long(y) + 1, 0)) -
                          core.c.values(x, grid.flatten(long(y) - 1, 0))) /
                         (2.0 * dx);
      lo = std::min(lo, dyc);
      hi = std::max(hi, dyc);
    }
    const double required = members.empty() ? 0.0 : hi - lo;
    const double jump = (at(long(y) - 1) - at(long(y) - 3)) / (2.0 * dx) -
                        (at(long(y) + 3) - at(long(y) + 1)) / (2.0 * dx);
    const double margin = jump - (0.5 * required - slack);
    rep.min_margin = std::min(rep.min_margin, margin);
    if (margin < 0.0) ++rep.violations;
  }
  if (rep.sing_c.empty()) rep.min_margin = 0.0;
  rep.included = rep.violations == 0;

  for (std::size_t y = 0; y < grid.size(); ++y) {
    const auto& members =
        core.singc.reachable[y].empty() ? core.singc.superdiff[y] : core.singc.reachable[y];
    std::vector<double> covs;
    for (const auto& g : core.sing.estimates[y].d_star) covs.push_back(g[0]);
    const double cells =
        landing_defect_cells(m, grid, y, covs, members, tau, opts.table.dt);
    rep.max_landing_cells = std::max(rep.max_landing_cells, cells);
  }
  rep.map_ok = rep.max_landing_cells <= opts.landing_cells;
  return rep;
}

}  // namespace wkot
