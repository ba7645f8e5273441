// Acceptance gate: twelve numbered checks covering the whole toolkit, each
// with tolerances pinned in this file and an enforced wall-clock budget.  One
// line of output per check; a check fails on a wrong value OR a blown budget.
// Run with no arguments for the full gate, or pass check numbers for a subset.

#include "wkot/clax.hpp"
#include "wkot/clax_core.hpp"
#include "wkot/dirac.hpp"
#include "wkot/fundamental.hpp"
#include "wkot/graph_check.hpp"
#include "wkot/kantorovich.hpp"
#include "wkot/model.hpp"
#include "wkot/rlo.hpp"
#include "wkot/semiconcave.hpp"
#include "wkot/space.hpp"
#include "wkot/weak_kam.hpp"

#include "exact_rational.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace wkot;

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

Matrix rand_cost(std::size_t nx, std::size_t ny, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix c(nx, ny);
  for (double& v : c.data) v = u(rng);
  return c;
}

Potential rand_potential(std::size_t n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return Potential(std::move(v));
}

// Strictly positive weights, so every point is in the support.
ProbMeasure rand_simplex(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double acc = 0.0;
  for (double& x : w) acc += (x = u(rng));
  for (double& x : w) x /= acc;
  return ProbMeasure(std::move(w));
}

Potential rand_fourier(const TorusGrid& grid, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a1 = u(rng), b1 = u(rng), a2 = u(rng), b2 = u(rng);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i)[0];
    v[i] = amp * (a1 * std::sin(2 * M_PI * x) + b1 * std::cos(2 * M_PI * x) +
                  0.5 * a2 * std::sin(4 * M_PI * x) + 0.5 * b2 * std::cos(4 * M_PI * x));
  }
  return Potential(std::move(v));
}

ProbMeasure rand_atoms(const TorusGrid& grid, std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  std::set<std::size_t> atoms;
  while (int(atoms.size()) < count) atoms.insert(pick(rng));
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> w(grid.size(), 0.0);
  double acc = 0.0;
  for (std::size_t a : atoms) acc += (w[a] = u(rng));
  for (double& x : w) x /= acc;
  return ProbMeasure(std::move(w));
}

Potential sine_potential(const TorusGrid& grid, double amp) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    v[i] = amp * std::sin(2.0 * M_PI * grid.point(i)[0]);
  return Potential(std::move(v));
}

// ---------------------------------------------------------------------------
// 1. Order reversal and idempotence of the transform pair.

bool check1(std::string& d) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> size(1, 20);
  double worst_order = 0.0, worst_idem = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t nx = size(rng), ny = size(rng);
    const CostTable c(rand_cost(nx, ny, rng, -5.0, 5.0));
    const Potential phi = rand_potential(nx, rng, 5.0);
    const Potential psi = rand_potential(ny, rng, 5.0);

    // T- T+ psi >= psi and T+ T- phi <= phi, pointwise.
    const Potential defect = commutator_defect(psi, c);
    for (double v : defect.values) worst_order = std::max(worst_order, -v);
    const Potential tptm = t_plus(t_minus(phi, c), c);
    for (std::size_t i = 0; i < nx; ++i)
      worst_order = std::max(worst_order, tptm[i] - phi[i]);

    // Both composites are idempotent on the images of their own transform.
    const Potential a = t_minus(phi, c);
    const Potential a2 = t_minus(t_plus(a, c), c);
    for (std::size_t y = 0; y < ny; ++y)
      worst_idem = std::max(worst_idem, std::abs(a2[y] - a[y]));
    const Potential b = t_plus(psi, c);
    const Potential b2 = t_plus(t_minus(b, c), c);
    for (std::size_t x = 0; x < nx; ++x)
      worst_idem = std::max(worst_idem, std::abs(b2[x] - b[x]));
  }
  d = fmt("200 instances, worst order violation %.2e, worst idempotence gap %.2e",
          worst_order, worst_idem);
  return worst_order <= 1e-12 && worst_idem <= 1e-12;
}

// ---------------------------------------------------------------------------
// 2. Concavity is characterized by a vanishing defect, equivalently by a
//    nonempty superdifferential; the equivalence is an identity over exact
//    rationals.

bool check2(std::string& d) {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::size_t> size(2, 15);
  bool ok = true;

  // Images of T- have zero defect and attainment everywhere.
  double worst_image_defect = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t nx = size(rng), ny = size(rng);
    const CostTable c(rand_cost(nx, ny, rng, -5.0, 5.0));
    const Potential psi = t_minus(rand_potential(nx, rng, 5.0), c);
    const CConcavity cc = is_c_concave(psi, c);
    worst_image_defect = std::max(worst_image_defect, cc.max_defect);
    ok = ok && cc.c_concave && cc.superdiff_nonempty_everywhere;
  }
  ok = ok && worst_image_defect <= 1e-12;

  // Arbitrary potentials: emptiness flips exactly with the defect.  Floating
  // point cannot classify points within an ulp of the tolerance, so the two
  // implications are asserted on either side of a guard band around eps.
  std::size_t classified = 0, total = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t nx = size(rng), ny = size(rng);
    const CostTable c(rand_cost(nx, ny, rng, -5.0, 5.0));
    const Potential psi = rand_potential(ny, rng, 5.0);
    const Potential defect = commutator_defect(psi, c);
    const double eps = arg_tolerance(c);
    for (std::size_t y = 0; y < ny; ++y) {
      ++total;
      const bool attained = !c_superdiff(psi, c, y).empty();
      if (defect[y] <= 0.5 * eps) {
        ok = ok && attained;
        ++classified;
      } else if (defect[y] > 2.0 * eps) {
        ok = ok && !attained;
        ++classified;
      }
    }
  }
  ok = ok && classified >= (total * 9) / 10;

  // Exact rational arithmetic: zero defect iff nonempty, with eps = 0.
  std::uniform_int_distribution<long long> num(-60, 60);
  std::uniform_int_distribution<long long> den(1, 8);
  std::uniform_int_distribution<std::size_t> rsize(1, 12);
  for (int k = 0; k < 50 && ok; ++k) {
    const std::size_t nx = rsize(rng), ny = rsize(rng);
    MatrixT<Rat> c(nx, ny);
    for (Rat& v : c.data) v = Rat(num(rng), den(rng));
    std::vector<Rat> phi(nx);
    for (Rat& v : phi) v = Rat(num(rng), den(rng));

    const std::vector<Rat> image = claxcore::t_minus(phi, c);
    for (const Rat& v : claxcore::commutator_defect(image, c)) ok = ok && v == Rat(0);

    std::vector<Rat> raw(ny);
    for (Rat& v : raw) v = Rat(num(rng), den(rng));
    const std::vector<Rat> defect = claxcore::commutator_defect(raw, c);
    const auto sets = claxcore::superdiff_sets(raw, c, Rat(0));
    for (std::size_t y = 0; y < ny; ++y)
      ok = ok && ((defect[y] == Rat(0)) == !sets[y].empty());
  }

  d = fmt("image defect %.2e, %zu/%zu float points classified, 50 exact instances",
          worst_image_defect, classified, total);
  return ok;
}

// ---------------------------------------------------------------------------
// 3. Strong duality with certified gaps, and the two one-potential
//    reformulations convert into each other through the transforms.

bool check3(std::string& d) {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  bool ok = true;
  double worst_gap = 0.0, worst_ic = 0.0, worst_conv = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t nx = size(rng), ny = size(rng);
    const ProbMeasure mu = rand_simplex(nx, rng), nu = rand_simplex(ny, rng);
    const CostTable c(rand_cost(nx, ny, rng, 0.0, 5.0));
    const KantorovichResult res = solve_kantorovich(mu, nu, c);
    ok = ok && res.certified && is_coupling(res.plan, mu, nu);
    worst_gap = std::max(worst_gap, std::abs(res.gap));
    worst_ic = std::max(worst_ic, res.max_ic_violation);

    if (k % 10 != 0) continue;
    // One-potential forms, plus both conversion directions: the transform of
    // an optimizer of one form optimizes the other.
    const KMinusCert km = solve_K_minus(mu, nu, c);
    const KPlusCert kp = solve_K_plus(mu, nu, c);
    ok = ok && km.certified && kp.certified;
    worst_gap = std::max({worst_gap, std::abs(km.gap), std::abs(kp.gap)});

    const Potential psi_conv = t_minus(km.phi, c);
    worst_conv = std::max(worst_conv, std::abs(integrate(t_plus(psi_conv, c), mu) -
                                               (integrate(psi_conv, nu) - res.value)));
    const Potential phi_conv = t_plus(kp.psi, c);
    worst_conv = std::max(worst_conv, std::abs(integrate(t_minus(phi_conv, c), nu) -
                                               (integrate(phi_conv, mu) + res.value)));
  }
  d = fmt("50 instances, worst gap %.2e, constraint violation %.2e, conversion %.2e",
          worst_gap, worst_ic, worst_conv);
  // The conversion identity inherits both certified gaps, hence the wider band.
  return ok && worst_gap <= 1e-9 && worst_ic <= 1e-9 && worst_conv <= 1e-8;
}

// ---------------------------------------------------------------------------
// 4. Optimal plans live on the zero-slack set of an optimal potential, and a
//    bumped potential is rejected by the same test.

bool check4(std::string& d) {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<std::size_t> size(5, 30);
  bool ok = true;
  double worst_slack = 0.0, worst_reject = 1e300, worst_drop = 1e300;
  for (int k = 0; k < 50; ++k) {
    const std::size_t nx = size(rng);
    const std::size_t ny = nx - 2;  // fewer columns force a shared column below
    const ProbMeasure mu = rand_simplex(nx, rng), nu = rand_simplex(ny, rng);
    const CostTable c(rand_cost(nx, ny, rng, 0.0, 5.0));
    const KantorovichResult res = solve_kantorovich(mu, nu, c);

    const SupportCheck good = support_characterization(res.phi, res.plan, c);
    ok = ok && good.ok;
    worst_slack = std::max(worst_slack, good.max_slack_on_support);

    // Bump the potential on one row of a column fed by two rows.  Another row
    // still attains the old minimum there, so the bumped row's slack on that
    // support pair rises by the full bump and the test must reject.
    std::vector<std::vector<std::size_t>> col_rows(ny);
    for (const auto& [i, j] : res.plan.support()) col_rows[j].push_back(i);
    std::size_t y_star = ny, x_star = 0;
    double best_min = -1.0;
    for (std::size_t j = 0; j < ny; ++j) {
      if (col_rows[j].size() < 2) continue;
      double mn = 1e300;
      for (std::size_t i : col_rows[j]) mn = std::min(mn, res.plan(i, j));
      if (mn > best_min) {
        best_min = mn;
        y_star = j;
        x_star = col_rows[j][0];
      }
    }
    ok = ok && y_star < ny;
    if (y_star == ny) continue;
    Potential bad = res.phi;
    bad[x_star] += 0.05;
    const SupportCheck reject = support_characterization(bad, res.plan, c);
    ok = ok && !reject.ok;
    worst_reject = std::min(worst_reject, reject.max_slack_on_support);

    // The dual objective strictly drops for the bumped potential.
    const double j_opt =
        integrate(t_minus(res.phi, c), nu) - integrate(res.phi, mu);
    const double j_bad = integrate(t_minus(bad, c), nu) - integrate(bad, mu);
    worst_drop = std::min(worst_drop, j_opt - j_bad);
    ok = ok && j_bad < j_opt - 1e-12;
  }
  d = fmt("50 instances, support slack %.2e, rejection slack >= %.3f, objective drop >= %.2e",
          worst_slack, worst_reject, worst_drop);
  return ok && worst_slack <= 1e-9 && worst_reject >= 0.05 - 1e-6;
}

// ---------------------------------------------------------------------------
// 5. The flat-potential fundamental solution matches its closed form, and the
//    tables compose by the semigroup (Markov) property.

bool check5(std::string& d) {
  const LagrangianModel m = LagrangianModel::free_model();
  const TorusGrid grid(1, 64);
  bool ok = true;
  double worst = 0.0;
  FundamentalTable quarter;
  for (double t : {0.25, 1.0}) {
    FundamentalTable tab = build_fundamental_table(m, grid, 0.0, t);
    ok = ok && !tab.any_boundary;
    for (std::size_t i = 0; i < grid.size(); i += 4)
      for (std::size_t j = 0; j < grid.size(); j += 4) {
        const double dist = grid.distance(i, j);
        worst = std::max(worst, std::abs(tab.h(i, j) - dist * dist / (2.0 * t)));
      }
    if (t == 0.25) quarter = std::move(tab);
  }
  ok = ok && worst <= 1e-6;

  const FundamentalTable whole = build_fundamental_table(m, grid, 0.0, 0.5);
  const FundamentalTable second = build_fundamental_table(m, grid, 0.25, 0.5);
  const double markov = markov_defect(whole, quarter, second);
  d = fmt("64-node torus, closed-form error %.2e (16x16 sample, t in {0.25, 1}), "
          "composition defect %.2e",
          worst, markov);
  return ok && markov <= 2.0 / 64;
}

// ---------------------------------------------------------------------------
// 6. The gradient graph of the evolved potential is the Hamiltonian-flow
//    image of the initial gradient graph, with first-order convergence.

bool check6(std::string& d) {
  bool ok = true;
  std::string parts;
  for (const LagrangianModel& m :
       {LagrangianModel::free_model(), LagrangianModel::pendulum(1.0)}) {
    const TorusGrid coarse(1, 64), fine(1, 128);
    const ArnaudReport rc =
        arnaud_graph_check(m, sine_potential(coarse, 0.05), coarse, 0.05, 1e-3);
    const ArnaudReport rf =
        arnaud_graph_check(m, sine_potential(fine, 0.05), fine, 0.05, 5e-4);
    const double ratio = rc.hausdorff > 1e-12 ? rf.hausdorff / rc.hausdorff : 0.0;
    ok = ok && rc.hausdorff <= 5.0 / 64;
    ok = ok && (rc.hausdorff <= 1e-12 || (ratio >= 0.3 && ratio <= 0.7));
    parts += fmt("%s%s H=%.2e ratio %.2f", parts.empty() ? "" : ", ",
                 m.kind_name().c_str(), rc.hausdorff, ratio);
  }
  d = parts + fmt("  (bound %.2e, ratio in [0.3, 0.7])", 5.0 / 64);
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Short horizons: the kink set and the multi-valued set coincide on the
//    cone and two-parabola fixtures.  Long horizons: multi-valued points are
//    still kinks, never the other way around.

bool check7(std::string& d) {
  const LagrangianModel m = LagrangianModel::free_model();
  const TorusGrid grid(1, 64);
  const double t_short = 0.05;
  bool ok = true;

  auto envelope = [&](Potential raw, double tau) {
    const FundamentalTable tab = build_fundamental_table(m, grid, 0.0, tau);
    const CostTable cost(tab.h);
    return t_minus(t_plus(raw, cost), cost);
  };

  // Torus-distance fixture 2 d (d - 1): slope jump 4 at the vertex, closed
  // quadratically across the cut locus so the input stays semiconcave.
  std::vector<double> cone(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dist = std::abs(signed_diff(grid.point(i)[0], 0.5));
    cone[i] = 2.0 * dist * (dist - 1.0);
  }
  const CoincidenceReport r1 =
      short_time_coincidence(m, envelope(Potential(std::move(cone)), t_short), grid,
                             0.0, t_short);
  ok = ok && r1.coincide && r1.pairing_ok;

  // Minimum of two smooth cost sections from antipodal sources; the crossings
  // land exactly on grid nodes so no detector loses half the slope jump.
  const FundamentalTable sec = build_fundamental_table(m, grid, 0.0, 0.2);
  const std::size_t x1 = grid.nearest_node(0.25), x2 = grid.nearest_node(0.75);
  std::vector<double> raw(grid.size());
  for (std::size_t y = 0; y < grid.size(); ++y)
    raw[y] = std::min(sec.h(x1, y), sec.h(x2, y));
  const CoincidenceReport r2 =
      short_time_coincidence(m, envelope(Potential(std::move(raw)), t_short), grid,
                             0.0, t_short);
  ok = ok && r2.coincide && r2.pairing_ok;

  std::mt19937_64 rng(707);
  double min_margin = 1e300;
  int trials = 0;
  // Zero force makes the splitting integrator exact at any step, so the long
  // horizons can use a coarser table step without losing a digit.
  TableOptions coarse;
  coarse.dt = 5e-3;
  RegimeOptions ropts;
  ropts.table = coarse;
  for (double t : {1.0, 2.0}) {
    const FundamentalTable tab = build_fundamental_table(m, grid, 0.0, t, coarse);
    const CostTable cost(tab.h);
    for (int k = 0; k < 10; ++k, ++trials) {
      const Potential psi = t_minus(rand_fourier(grid, rng, 0.3), cost);
      const InclusionReport rep = long_time_inclusion(m, psi, grid, 0.0, t, ropts);
      ok = ok && rep.included;
      min_margin = std::min(min_margin, rep.min_margin);
    }
  }
  d = fmt("cone %zu=%zu, parabolas %zu=%zu, %d inclusion trials at t in {1, 2}, "
          "margin %+.3f",
          r1.sing.size(), r1.sing_c.size(), r2.sing.size(), r2.sing_c.size(), trials,
          min_margin);
  return ok;
}

// ---------------------------------------------------------------------------
// 8. Stationary theory on the 32-node torus: flat potential (everything
//    static, flat barrier, all points multi-valued for the barrier cost) and
//    the unit-amplitude cosine well (critical value 1, resting point at 0, the
//    static class realizes admissibility at every target).

bool check8(std::string& d) {
  bool ok = true;
  std::string parts;
  const TorusGrid grid(1, 32);
  const std::size_t n = grid.size();

  {
    const LagrangianModel m = LagrangianModel::free_model();
    const PeierlsResult pr = compute_peierls_barrier(m, grid);
    const double hmax = max_abs(pr.h);
    ok = ok && std::abs(pr.c0) <= 1e-3 && hmax <= 1e-3;
    try {
      const CriticalValue cv = mane_critical_value(m, pr);
      ok = ok && std::abs(cv.eigen_estimate) <= 1e-3 && cv.max_discrepancy <= 1e-2;
    } catch (const SolverError&) {
      ok = false;
    }
    const StaticClassPartition part = aubry_and_static_classes(pr);
    ok = ok && part.aubry.size() == n && part.classes.size() == 1 &&
         part.classes[0].size() == n;

    // With a flat barrier every point of the torus is multi-valued for the
    // barrier cost.  The tie window 5e-3 sits above the barrier's own
    // discretization floor (|h| <= 1e-3) but far below any genuine scale.
    const WeakKamPair wk = weak_kam_pair(m, pr);
    const CSingularReport sing =
        sing_c(wk.u_minus, CostTable(pr.h), nullptr, nullptr, 5e-3);
    ok = ok && sing.singular.size() == n;
    parts += fmt("flat: |c0| %.1e, |h| %.1e, classes 1x%zu, multi-valued %zu/%zu",
                 std::abs(pr.c0), hmax, part.classes.empty() ? 0 : part.classes[0].size(),
                 sing.singular.size(), n);
  }

  {
    const LagrangianModel m = LagrangianModel::pendulum(1.0);
    const PeierlsResult pr = compute_peierls_barrier(m, grid);
    double eigen = 1e300, disc = 1e300;
    try {
      const CriticalValue cv = mane_critical_value(m, pr);
      eigen = cv.eigen_estimate;
      disc = cv.max_discrepancy;
    } catch (const SolverError&) {
    }
    ok = ok && std::abs(pr.c0 - 1.0) <= 1e-2 && std::abs(eigen - 1.0) <= 1e-2 &&
         disc <= 1e-2;

    std::size_t rest = 0;
    double best = -1e300;
    for (std::size_t i = 0; i < n; ++i)
      if (m.V(grid.point(i)[0]) > best) best = m.V(grid.point(rest = i)[0]);
    const StaticClassPartition part = aubry_and_static_classes(pr);
    ok = ok && part.aubry.size() == 1 && part.aubry[0] == rest &&
         part.classes.size() == 1;

    bool incl = true;
    double worst_slack = 0.0;
    try {
      const WeakKamPair wk = weak_kam_pair(m, pr);
      ok = ok && wk.compose_defect <= 1e-4;
      for (std::size_t y = 0; y < n; ++y) {
        const StaticInclusionReport rep = static_class_in_superdiff(part, pr.h, wk, y);
        incl = incl && rep.included;
        worst_slack = std::max(worst_slack, rep.worst_slack);
      }
    } catch (const SolverError&) {
      incl = false;
    }
    ok = ok && incl;
    parts += fmt("; cosine: eigen %.4f, rest node %zu, class slack %.1e", eigen, rest,
                 worst_slack);
  }

  d = parts;
  return ok;
}

// ---------------------------------------------------------------------------
// 9. Point-target constructions round-trip: backward flow of terminal
//    covectors builds the optimal source, forward shooting recovers covectors
//    inside the superdifferential hull, and the rebuild lands within one cell.

bool check9(std::string& d) {
  const TorusGrid grid(1, 64);
  bool ok = true;
  std::string parts;

  DiracOptions opts;
  opts.round_trip_cells = 1.0;

  // Smooth fixture: shallow cosine well, sine initial potential, covectors
  // sampled from the superdifferential of the evolved potential.
  {
    const LagrangianModel m = LagrangianModel::pendulum(0.25);
    const double t = 0.1;
    const std::size_t y0 = grid.size() / 3;
    const Potential phi = sine_potential(grid, 0.05);
    const FundamentalTable tab = build_fundamental_table(m, grid, 0.0, t);
    const Potential psi = t_minus(phi, CostTable(tab.h));
    const SuperdiffEstimate est = superdifferential(psi, grid, y0);
    CovectorMeasure rho;
    for (const auto& s : est.d_star) {
      bool dup = false;
      for (double q : rho.p) dup = dup || std::abs(q - s[0]) <= 1e-12;
      if (!dup) rho.p.push_back(s[0]);
    }
    rho.w.assign(rho.p.size(), 1.0 / double(rho.p.size()));

    const DiracConstruction dc = dirac_construction(m, phi, grid, y0, t, rho, opts);
    ok = ok && dc.certified;
    bool rec_ok = false;
    double cells = -1.0, excess = -1.0, pad = 0.0;
    try {
      const CovectorRecovery rec =
          recover_covector_measure(m, phi, grid, y0, t, dc.mu, opts);
      rec_ok = rec.round_trip_ok && rec.round_trip_cells <= 1.0 &&
               rec.max_hull_excess <= rec.pad_used;
      cells = rec.round_trip_cells;
      excess = rec.max_hull_excess;
      pad = rec.pad_used;
    } catch (const SolverError&) {
    }
    ok = ok && rec_ok;
    parts += fmt("smooth: trip %.2f cells, hull excess %.3f <= pad %.3f", cells,
                 excess, pad);
  }

  // Kinked fixture: minimum of two flat-model cost sections whose crossing
  // sits exactly on a node; the two branch slopes +-1.25 are the terminal
  // covectors and the backward characteristics land exactly on nodes 24 / 40.
  {
    const LagrangianModel m = LagrangianModel::free_model();
    const double t = 0.1;
    const FundamentalTable sec = build_fundamental_table(m, grid, 0.0, 0.1);
    const std::size_t s1 = grid.nearest_node(0.25), s2 = grid.nearest_node(0.75);
    std::vector<double> raw(grid.size());
    for (std::size_t y = 0; y < grid.size(); ++y)
      raw[y] = std::min(sec.h(s1, y), sec.h(s2, y));
    const Potential phi(std::move(raw));
    const std::size_t y0 = grid.nearest_node(0.5);
    CovectorMeasure rho;
    rho.p = {1.25, -1.25};
    rho.w = {0.5, 0.5};

    bool built = false, rec_ok = false;
    double cells = -1.0, excess = -1.0, pad = 0.0, snap = -1.0;
    try {
      const DiracConstruction dc = dirac_construction(m, phi, grid, y0, t, rho, opts);
      built = dc.certified;
      snap = dc.snap_dist;
      const CovectorRecovery rec =
          recover_covector_measure(m, phi, grid, y0, t, dc.mu, opts);
      rec_ok = rec.round_trip_ok && rec.round_trip_cells <= 1.0 &&
               rec.max_hull_excess <= rec.pad_used;
      cells = rec.round_trip_cells;
      excess = rec.max_hull_excess;
      pad = rec.pad_used;
    } catch (const SolverError&) {
    }
    ok = ok && built && rec_ok && snap <= 0.5 * grid.spacing();
    parts += fmt("; kinked: trip %.2f cells, hull excess %.3f <= pad %.3f", cells,
                 excess, pad);
  }

  d = parts;
  return ok;
}

// ---------------------------------------------------------------------------
// 10. Net approximation of a spread-out target: Wasserstein rate 2/n, value
//     stabilization, and subdifferential membership once the net resolves the
//     support.

bool check10(std::string& d) {
  const LagrangianModel m = LagrangianModel::free_model();
  const TorusGrid grid(1, 64);
  const Potential phi = sine_potential(grid, 0.05);

  std::vector<double> w(grid.size(), 0.0);
  for (int k = 0; k < 8; ++k) w[std::size_t(k) * 8] = 1.0 / 8.0;
  const ProbMeasure nu{std::move(w)};

  const NetReport rep = net_approximation(m, phi, grid, nu, 0.5, {2, 4, 8, 16, 32});
  bool member_ok = true, parts_ok = true;
  for (const NetStage& s : rep.stages) {
    if (s.n >= 8) member_ok = member_ok && s.membership_ok;
    parts_ok = parts_ok && s.certified;
  }
  d = fmt("%zu stages, W1 rate %s, final value %.6f, last change %.2e",
          rep.stages.size(), rep.w1_ok ? "<= 2/n" : "VIOLATED", rep.final_value,
          rep.last_value_change);
  return rep.w1_ok && parts_ok && member_ok && rep.last_value_change <= 1e-3;
}

// ---------------------------------------------------------------------------
// 11. The lifted operators on measures: value equals the integral of the
//     pointwise evolution, the three displayed forms agree, minimizing curves
//     obey the equation of motion, and sampled competitors never win.

bool check11(std::string& d) {
  std::mt19937_64 rng(1111);
  const TorusGrid grid(1, 32);
  const double t_list[3] = {0.1, 0.25, 0.5};
  bool ok = true;
  double worst_gap = 0.0, worst_el = 0.0, worst_comp = 0.0;
  int runs = 0;
  for (const LagrangianModel& m :
       {LagrangianModel::free_model(), LagrangianModel::pendulum(0.25)}) {
    for (int k = 0; k < 20; ++k, ++runs) {
      const Potential phi = rand_fourier(grid, rng, 0.1);
      const ProbMeasure target = rand_atoms(grid, rng, 3 + int(k % 2));
      const double t = t_list[k % 3];
      const LiftedResult res = (k % 2 == 0)
                                   ? p_minus(m, phi, target, grid, t)
                                   : p_plus(m, phi, target, grid, t);
      ok = ok && res.certified;
      worst_gap = std::max(worst_gap, res.max_expr_gap);
      worst_comp = std::min(worst_comp, res.competitor_min_excess);
      const EulerLagrangeReport el = euler_lagrange_slice_check(m, res.ensemble);
      ok = ok && el.slices_mass_ok;
      worst_el = std::max(worst_el, el.max_residual);
    }
  }
  d = fmt("%d lifts (both directions, both models), expression gap %.2e, motion "
          "residual %.2e, competitor excess %+.1e",
          runs, worst_gap, worst_el, worst_comp);
  return ok && worst_gap <= 1e-6 && worst_el <= 1e-4 && worst_comp >= -1e-8;
}

// ---------------------------------------------------------------------------
// 12. The support of any plan projects exactly onto the supports of its
//     marginals.

bool check12(std::string& d) {
  std::mt19937_64 rng(1212);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool ok = true;
  for (int k = 0; k < 100; ++k) {
    const std::size_t nx = size(rng), ny = size(rng);
    Matrix pm(nx, ny);
    for (double& v : pm.data) {
      const double r = u(rng);
      v = r < 0.4 ? 0.0 : r;  // plenty of empty rows/columns
    }
    pm.data[0] = std::max(pm.data[0], 0.5);
    double mass = 0.0;
    for (double v : pm.data) mass += v;
    for (double& v : pm.data) v /= mass;
    ok = ok && projected_support_check(TransportPlan(std::move(pm)));
  }
  d = "100 random plans with sparse rows and columns";
  return ok;
}

struct Check {
  int id;
  const char* title;
  double budget_s;
  bool (*run)(std::string&);
};

const Check kChecks[] = {
    {1, "transform order and idempotence laws", 1.0, check1},
    {2, "concavity characterized by attainment", 5.0, check2},
    {3, "strong duality and one-potential forms", 30.0, check3},
    {4, "optimal-plan support characterization", 10.0, check4},
    {5, "flat-model fundamental solution, semigroup", 60.0, check5},
    {6, "gradient-graph transport under the flow", 60.0, check6},
    {7, "singular-set coincidence and inclusion", 120.0, check7},
    {8, "stationary barrier, classes, conjugate pair", 300.0, check8},
    {9, "point-target construction round trip", 60.0, check9},
    {10, "net approximation of a general target", 120.0, check10},
    {11, "lifted operators reduce to pointwise evolution", 180.0, check11},
    {12, "plan support projects onto marginal supports", 1.0, check12},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0, ran = 0;
  for (const Check& c : kChecks) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    ++ran;
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = fmt("exception: %s", e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed <= c.budget_s;
    const bool pass = ok && in_budget;
    if (!pass) ++failed;
    std::printf("[%2d] %s  %-46s %7.2fs /%4.0fs  %s%s\n", c.id, pass ? "PASS" : "FAIL",
                c.title, elapsed, c.budget_s, detail.c_str(),
                ok && !in_budget ? "  [over budget]" : "");
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%d checks passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
