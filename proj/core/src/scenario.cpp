#include "wkot/scenario.hpp"

#include "wkot/clax.hpp"
#include "wkot/dirac.hpp"
#include "wkot/graph_check.hpp"
#include "wkot/kantorovich.hpp"
#include "wkot/model.hpp"
#include "wkot/rlo.hpp"
#include "wkot/semiconcave.hpp"
#include "wkot/space.hpp"
#include "wkot/weak_kam.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace wkot {

namespace {

struct Ctx {
  const Toml& cfg;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  double ts = 1.0;  // tolerance scale
  bool quiet = false;
  ScenarioResult* res = nullptr;
  json data = json::object();

  void note(const std::string& line) const {
    if (!quiet) std::printf("%s\n", line.c_str());
  }

  void cert(std::string name, std::string statement, bool pass, json details) {
    if (!quiet)
      std::printf("  [%s] %s\n", pass ? "PASS" : "FAIL", name.c_str());
    res->certificates.push_back(
        Certificate{std::move(name), std::move(statement), pass, std::move(details)});
  }

  void emit(const std::string& fname, const std::string& content) const {
    std::ofstream f(out / fname, std::ios::binary);
    if (!f) throw DomainError("scenario: cannot write " + (out / fname).string());
    f << content;
    res->outputs.push_back(fname);
  }
};

int int_param(const Toml& cfg, const std::string& sec, const std::string& key, int fallback) {
  double v = cfg.num(sec, key, double(fallback));
  if (v != std::floor(v))
    throw DomainError("config: [" + sec + "] " + key + " must be an integer");
  return int(v);
}

LagrangianModel model_from(const Toml& cfg) {
  return LagrangianModel::make(cfg.str("model", "kind", "zero"),
                               cfg.num("model", "amplitude", 1.0),
                               cfg.num("model", "shift", 0.0));
}

TorusGrid grid_from(const Toml& cfg, int default_n) {
  return TorusGrid(int_param(cfg, "grid", "dim", 1), int_param(cfg, "grid", "n", default_n));
}

Potential sampled_potential(const TorusGrid& grid, const std::string& kind, double amp,
                            double freq) {
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto pt = grid.point(i);
    double s = std::sin(2.0 * M_PI * freq * pt[0]) +
               (grid.dim == 2 ? std::sin(2.0 * M_PI * freq * pt[1]) : 0.0);
    double c = std::cos(2.0 * M_PI * freq * pt[0]) +
               (grid.dim == 2 ? std::cos(2.0 * M_PI * freq * pt[1]) : 0.0);
    if (kind == "sine")
      v[i] = amp * s;
    else if (kind == "cosine")
      v[i] = amp * c;
    else if (kind == "zero")
      v[i] = 0.0;
    else
      throw DomainError("config: unknown potential kind: " + kind);
  }
  return Potential(std::move(v));
}

Potential potential_from(const Toml& cfg, const TorusGrid& grid) {
  std::string kind = cfg.str("potential", "kind", "sine");
  if (kind == "values") {
    std::vector<double> v = cfg.nums("potential", "values");
    if (v.size() != grid.size())
      throw DomainError("config: [potential] values must have one entry per grid node");
    return Potential(std::move(v));
  }
  return sampled_potential(grid, kind, cfg.num("potential", "amplitude", 0.05),
                           cfg.num("potential", "frequency", 1.0));
}

Potential random_fourier(const TorusGrid& grid, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double a1 = u(rng), b1 = u(rng), a2 = u(rng), b2 = u(rng);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double x = grid.point(i)[0];
    v[i] = amp * (a1 * std::sin(2 * M_PI * x) + b1 * std::cos(2 * M_PI * x) +
                  0.5 * a2 * std::sin(4 * M_PI * x) + 0.5 * b2 * std::cos(4 * M_PI * x));
  }
  return Potential(std::move(v));
}

ProbMeasure random_measure(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n, 0.0);
  double acc = 0.0;
  for (double& x : w) {
    double r = u(rng);
    x = r < 0.25 ? 0.0 : r * r;  // a sprinkle of empty atoms keeps supports honest
    acc += x;
  }
  if (acc <= 0.0) {
    w[0] = 1.0;
    acc = 1.0;
  }
  for (double& x : w) x /= acc;
  return ProbMeasure(std::move(w));
}

ProbMeasure random_atoms(const TorusGrid& grid, std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  std::set<std::size_t> atoms;
  while (int(atoms.size()) < count) atoms.insert(pick(rng));
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> w(grid.size(), 0.0);
  double acc = 0.0;
  for (std::size_t a : atoms) {
    w[a] = u(rng);
    acc += w[a];
  }
  for (double& x : w) x /= acc;
  return ProbMeasure(std::move(w));
}

Matrix random_cost(std::size_t nx, std::size_t ny, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(0.0, scale);
  Matrix c(nx, ny);
  for (double& v : c.data) v = u(rng);
  return c;
}

json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// ---------------------------------------------------------------------------
// transform: conjugation laws on random finite instances.

void run_transform(Ctx& c) {
  const int trials = int_param(c.cfg, "params", "trials", 50);
  const int max_pts = int_param(c.cfg, "params", "max_points", 20);
  if (max_pts < 2) throw DomainError("config: [params] max_points must be >= 2");
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<int> size_dist(2, max_pts);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  double worst_lower = 0.0, worst_upper = 0.0, worst_idem = 0.0, worst_defect = 0.0;
  bool conc_ok = true;
  json rows = json::array();
  CsvWriter csv({"trial", "nx", "ny", "lower_gap", "upper_gap", "idempotence_defect"});
  for (int tr = 0; tr < trials; ++tr) {
    std::size_t nx = std::size_t(size_dist(rng)), ny = std::size_t(size_dist(rng));
    CostTable cost(random_cost(nx, ny, rng, 1.0));
    std::vector<double> pv(nx), qv(ny);
    for (double& x : pv) x = u(rng);
    for (double& x : qv) x = u(rng);
    Potential phi(pv), psi(qv);

    Potential back = t_minus(t_plus(psi, cost), cost);  // >= psi
    double lower = 0.0;
    for (std::size_t y = 0; y < ny; ++y) lower = std::max(lower, psi[y] - back[y]);

    Potential fwd = t_plus(t_minus(phi, cost), cost);  // <= phi
    double upper = 0.0;
    for (std::size_t x = 0; x < nx; ++x) upper = std::max(upper, fwd[x] - phi[x]);

    Potential tm = t_minus(phi, cost);
    Potential tm2 = t_minus(t_plus(tm, cost), cost);
    double idem = 0.0;
    for (std::size_t y = 0; y < ny; ++y) idem = std::max(idem, std::abs(tm2[y] - tm[y]));

    CConcavity conc = is_c_concave(tm, cost);
    conc_ok = conc_ok && conc.c_concave && conc.superdiff_nonempty_everywhere;
    worst_defect = std::max(worst_defect, conc.max_defect);

    worst_lower = std::max(worst_lower, lower);
    worst_upper = std::max(worst_upper, upper);
    worst_idem = std::max(worst_idem, idem);
    rows.push_back(json{{"trial", tr},
                        {"nx", nx},
                        {"ny", ny},
                        {"lower", lower},
                        {"upper", upper},
                        {"idem", idem}});
    csv.row({double(tr), double(nx), double(ny), lower, upper, idem});
  }

  const double tol = 1e-12 * c.ts;
  c.cert("order-reversal",
         "composing the two conjugations brackets the identity: the double transform "
         "raises psi and lowers phi, never the reverse",
         worst_lower <= tol && worst_upper <= tol,
         json{{"worst_lower_gap", worst_lower},
              {"worst_upper_gap", worst_upper},
              {"tolerance", tol}});
  c.cert("idempotence", "the triple composition collapses: re-transforming an evolved "
                        "potential reproduces it exactly",
         worst_idem <= tol, json{{"worst_defect", worst_idem}, {"tolerance", tol}});
  c.cert("concavity-fixed-point",
         "every transform image is concave-type: zero commutator defect and a nonempty "
         "superdifferential at every point",
         conc_ok && worst_defect <= tol,
         json{{"worst_commutator_defect", worst_defect}, {"tolerance", tol}});

  c.data["trials"] = rows;
  c.emit("trials.csv", csv.str());
}

// ---------------------------------------------------------------------------
// ot: strong duality, support slackness and the one-potential forms.

void run_ot(Ctx& c) {
  const int trials = int_param(c.cfg, "params", "trials", 12);
  const int max_n = int_param(c.cfg, "params", "max_n", 30);
  const bool perturb = c.cfg.flag("params", "perturb_dual", false);
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<int> size_dist(2, std::max(2, max_n));

  const double tol_gap = 1e-9 * c.ts;
  bool dual_ok = true, support_ok = true, km_ok = true, kp_ok = true, round_ok = true;
  double worst_gap = 0.0, worst_slack = 0.0, worst_round = 0.0;
  json rows = json::array();
  CsvWriter csv({"instance", "nx", "ny", "value", "gap", "support_slack"});
  json first_dump;
  KantorovichResult last;
  CostTable last_cost;

  for (int tr = 0; tr < trials; ++tr) {
    std::size_t nx = std::size_t(size_dist(rng)), ny = std::size_t(size_dist(rng));
    CostTable cost(random_cost(nx, ny, rng, 2.0));
    ProbMeasure mu = random_measure(nx, rng), nu = random_measure(ny, rng);

    KantorovichResult lp = solve_kantorovich(mu, nu, cost);
    dual_ok = dual_ok && lp.certified && std::abs(lp.gap) <= tol_gap;
    worst_gap = std::max(worst_gap, std::abs(lp.gap));

    SupportCheck sc = support_characterization(lp.phi, lp.plan, cost);
    support_ok = support_ok && sc.ok;
    worst_slack = std::max(worst_slack, sc.max_slack_on_support);

    KMinusCert km = solve_K_minus(mu, nu, cost, tol_gap);
    KPlusCert kp = solve_K_plus(mu, nu, cost, tol_gap);
    km_ok = km_ok && km.certified;
    kp_ok = kp_ok && kp.certified;

    // Round trip: the one-potential solution regenerates an optimal dual pair.
    Potential psi_back = t_minus(km.phi, cost);
    double pair_gap =
        std::abs(lp.value - (integrate(psi_back, nu) - integrate(km.phi, mu)));
    round_ok = round_ok && pair_gap <= tol_gap;
    worst_round = std::max(worst_round, pair_gap);

    rows.push_back(json{{"instance", tr},
                        {"nx", nx},
                        {"ny", ny},
                        {"value", lp.value},
                        {"gap", lp.gap},
                        {"support_slack", sc.max_slack_on_support}});
    csv.row({double(tr), double(nx), double(ny), lp.value, lp.gap,
             sc.max_slack_on_support});
    if (tr == 0) {
      json plan_rows = json::array();
      for (std::size_t i = 0; i < lp.plan.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < lp.plan.cols(); ++j) r.push_back(lp.plan(i, j));
        plan_rows.push_back(r);
      }
      first_dump = json{{"value", lp.value},
                       {"plan", plan_rows},
                       {"phi", num_array(lp.phi.values)},
                       {"psi", num_array(lp.psi.values)},
                       {"gap", lp.gap},
                       {"certified", lp.certified}};
    }
    last = lp;
    last_cost = cost;
  }

  c.cert("strong-duality",
         "the optimal plan value equals the best conjugate-pair dual value",
         dual_ok, json{{"worst_gap", worst_gap}, {"tolerance", tol_gap}});
  c.cert("support-slackness",
         "optimal plans place mass only where the dual constraint is tight", support_ok,
         json{{"worst_slack_on_support", worst_slack}});
  c.cert("one-potential-min",
         "the minimization over a single source potential attains the transport value",
         km_ok, json{{"tolerance", tol_gap}});
  c.cert("one-potential-max",
         "the maximization over a single target potential attains the transport value",
         kp_ok, json{{"tolerance", tol_gap}});
  c.cert("pair-roundtrip",
         "the one-potential solution converts back into an optimal conjugate pair",
         round_ok, json{{"worst_roundtrip_gap", worst_round}, {"tolerance", tol_gap}});

  if (perturb) {
    // A deliberately bumped potential must break the conjugate-pair identity;
    // this certificate asserts it still holds, so the scenario fails by design.
    Potential bad = last.phi;
    bad[0] += 0.05;
    Potential bad_psi = t_minus(bad, last_cost);
    double defect = 0.0;
    for (std::size_t y = 0; y < bad_psi.size(); ++y)
      defect = std::max(defect, std::abs(bad_psi[y] - last.psi[y]));
    double bad_value = integrate(bad_psi, plan_marginals(last.plan).second) -
                       integrate(bad, plan_marginals(last.plan).first);
    c.cert("perturbed-dual",
           "a perturbed source potential still certifies the duality identity", defect <= tol_gap && std::abs(bad_value - last.value) <= tol_gap,
           json{{"conjugate_defect", defect},
                {"value_shift", std::abs(bad_value - last.value)}});
  }

  c.data["instances"] = rows;
  c.data["first_instance"] = first_dump;
  c.emit("instances.csv", csv.str());
}

// ---------------------------------------------------------------------------
// dirac: backward-characteristic construction and covector recovery.

void run_dirac(Ctx& c) {
  LagrangianModel m = model_from(c.cfg);
  TorusGrid grid = grid_from(c.cfg, 64);
  const double t = c.cfg.num("params", "t", 0.1);
  Potential phi = potential_from(c.cfg, grid);
  const std::size_t y0 =
      std::size_t(int_param(c.cfg, "params", "y0_node", int(grid.size() / 3)));
  const std::size_t y1 =
      std::size_t(int_param(c.cfg, "params", "y1_node", int(2 * grid.size() / 3)));

  FundamentalTable tab = build_fundamental_table(m, grid, 0.0, t);
  CostTable cost(tab.h);
  Potential psi = t_minus(phi, cost);
  SuperdiffEstimate est = superdifferential(psi, grid, y0);
  CovectorMeasure rho;
  for (const auto& s : est.d_star) {
    bool dup = false;
    for (double q : rho.p) dup = dup || std::abs(q - s[0]) <= 1e-12;
    if (!dup) rho.p.push_back(s[0]);
  }
  rho.w.assign(rho.p.size(), 1.0 / double(rho.p.size()));

  DiracConstruction dc = dirac_construction(m, phi, grid, y0, t, rho);
  c.cert("point-target-support",
         "the optimal source for a point target is carried by the feet of backward "
         "characteristics through its covectors",
         dc.certified,
         json{{"support_slack", dc.cert_slack},
              {"eps_used", dc.eps_used},
              {"snap_distance", dc.snap_dist}});

  bool rec_ok = false;
  json rec_details;
  try {
    CovectorRecovery rec = recover_covector_measure(m, phi, grid, y0, t, dc.mu);
    rec_ok = rec.round_trip_ok;
    rec_details = json{{"hull", num_array(rec.hull)},
                       {"max_hull_excess", rec.max_hull_excess},
                       {"round_trip_cells", rec.round_trip_cells}};
  } catch (const SolverError& e) {
    rec_details = json{{"error", e.what()}};
  }
  c.cert("covector-recovery",
         "terminal covectors of the minimizing curves lie in the superdifferential "
         "hull and rebuild the source support within one cell",
         rec_ok, rec_details);

  MixtureConstruction mix =
      finite_mixture_construction(m, phi, grid, {y0, y1}, {0.6, 0.4}, t);
  c.cert("mixture-identity",
         "mixing per-target solutions solves the mixed-target problem with matching "
         "evolved and plan sides",
         mix.certified,
         json{{"evolved_side", mix.evolved_side}, {"plan_side", mix.plan_side}});

  std::vector<double> gx(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) gx[i] = grid.point(i)[0];
  c.data["grid_x"] = num_array(gx);
  c.data["psi"] = num_array(psi.values);

  CsvWriter csv({"covector", "weight", "foot", "node"});
  for (std::size_t i = 0; i < rho.p.size(); ++i)
    csv.row({rho.p[i], rho.w[i], dc.feet[i], double(grid.nearest_node(dc.feet[i]))});
  c.emit("feet.csv", csv.str());
}

// ---------------------------------------------------------------------------
// net: approximation of a general target measure along a net schedule.

void run_net(Ctx& c) {
  LagrangianModel m = model_from(c.cfg);
  TorusGrid grid = grid_from(c.cfg, 64);
  const double t = c.cfg.num("params", "t", 0.5);
  Potential phi = potential_from(c.cfg, grid);

  std::mt19937_64 rng(c.seed);
  ProbMeasure nu = [&] {
    if (c.cfg.has("params", "atoms")) {
      std::vector<double> atoms = c.cfg.nums("params", "atoms");
      std::vector<double> w(grid.size(), 0.0);
      for (double a : atoms) {
        std::size_t idx = std::size_t(a);
        if (a != std::floor(a) || idx >= grid.size())
          throw DomainError("config: [params] atoms must be valid node indices");
        w[idx] += 1.0 / double(atoms.size());
      }
      return ProbMeasure(std::move(w));
    }
    // Equally spaced atoms at a random offset: the atoms must be separated by
    // more than the finest net radius, or the final nets cannot resolve the
    // support and the transported value keeps drifting at the merge scale.
    const int count = int_param(c.cfg, "params", "atom_count", 8);
    std::uniform_int_distribution<std::size_t> off_dist(0, grid.size() - 1);
    const std::size_t off = off_dist(rng);
    std::vector<double> w(grid.size(), 0.0);
    for (int k = 0; k < count; ++k)
      w[(off + std::size_t(k) * grid.size() / std::size_t(count)) % grid.size()] =
          1.0 / count;
    return ProbMeasure(std::move(w));
  }();

  std::vector<int> schedule;
  for (double v : c.cfg.nums("params", "schedule", {2, 4, 8, 16, 32}))
    schedule.push_back(int(v));

  NetReport rep = net_approximation(m, phi, grid, nu, t, schedule);

  bool stable = rep.last_value_change <= 1e-3 * c.ts;
  bool member_ok = true, parts_ok = true;
  json rows = json::array();
  CsvWriter csv({"n", "net_size", "w1", "value", "certified", "membership"});
  for (const NetStage& s : rep.stages) {
    if (s.n >= 8) member_ok = member_ok && s.membership_ok;
    parts_ok = parts_ok && s.certified;
    rows.push_back(json{{"n", s.n},
                        {"net_size", s.net.size()},
                        {"w1", s.w1},
                        {"value", s.value},
                        {"certified", s.certified},
                        {"membership", s.membership_ok}});
    csv.row({double(s.n), double(s.net.size()), s.w1, s.value, s.certified ? 1.0 : 0.0,
             s.membership_ok ? 1.0 : 0.0});
  }

  // Mass near each final-support atom must not vanish along the tail of the
  // schedule (weak-convergence surrogate on a fixed grid).
  bool portmanteau_ok = true;
  const NetStage& fin = rep.stages.back();
  for (std::size_t x : fin.mu_n.support()) {
    double w = fin.mu_n[x];
    for (const NetStage& s : rep.stages) {
      if (s.n < 8) continue;
      double near = 0.0;
      for (std::size_t z : s.mu_n.support())
        if (grid.distance(x, z) <= std::max(2.0 / s.n, 2.0 * grid.spacing()) + 1e-12)
          near += s.mu_n[z];
      portmanteau_ok = portmanteau_ok && near >= w - 1e-6 * c.ts;
    }
  }

  c.cert("net-wasserstein", "reweighted nets approximate the target at rate 2/n",
         rep.w1_ok, json{{"stages", rows.size()}});
  c.cert("net-value-stable", "the transported values stabilize along the schedule",
         stable,
         json{{"last_change", rep.last_value_change}, {"tolerance", 1e-3 * c.ts}});
  c.cert("net-membership",
         "for fine nets, every optimal source atom pairs with a net point inside its "
         "subdifferential",
         member_ok, json::object());
  c.cert("net-mixtures-certified", "every stage's mixture construction certifies",
         parts_ok, json::object());
  c.cert("net-mass-persistence",
         "mass near each final source atom persists along the schedule tail",
         portmanteau_ok, json::object());

  c.data["stages"] = rows;
  c.emit("stages.csv", csv.str());
}

// ---------------------------------------------------------------------------
// singular: kink sets versus multi-valued transform sets in the two regimes.

void run_singular(Ctx& c) {
  LagrangianModel m = model_from(c.cfg);
  TorusGrid grid = grid_from(c.cfg, 64);
  const double t_short = c.cfg.num("params", "t_short", 0.05);
  const int trials = int_param(c.cfg, "params", "inclusion_trials", 5);

  // Concave-envelope projection makes a raw shape exactly transform-concave
  // while preserving its concave kinks.
  auto envelope = [&](const Potential& raw, double tau) {
    FundamentalTable tab = build_fundamental_table(m, grid, 0.0, tau);
    CostTable cost(tab.h);
    return t_minus(t_plus(raw, cost), cost);
  };

  // Fixture 1: torus-distance fixture 2 d (d - 1): a cone of slope jump 4 at
  // 1/2, closed quadratically across the cut locus so the function stays
  // semiconcave (a bare cone -2 d has a convex corner at the antipode and is
  // not an admissible input).
  std::vector<double> cone(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double d = std::abs(signed_diff(grid.point(i)[0], 0.5));
    cone[i] = 2.0 * d * (d - 1.0);
  }
  Potential psi_cone = envelope(Potential(std::move(cone)), t_short);
  CoincidenceReport r1 = short_time_coincidence(m, psi_cone, grid, 0.0, t_short);
  c.cert("coincidence-cone",
         "short horizons: the multi-valued set of the cone equals its kink set cell "
         "for cell, with covectors pairing across the flow",
         r1.coincide && r1.pairing_ok,
         json{{"sing", r1.sing.size()},
              {"sing_c", r1.sing_c.size()},
              {"unmatched", r1.unmatched},
              {"max_pairing_cells", r1.max_pairing_cells}});

  // Fixture 2: minimum of two cost sections built at a longer horizon, whose
  // crossings produce genuine kinks while both pieces stay smooth.  Antipodal
  // sources land both crossings exactly on grid nodes, so neither detector
  // loses half of the slope jump to cell splitting.
  {
    FundamentalTable sec = build_fundamental_table(m, grid, 0.0, 0.2);
    std::size_t x1 = grid.nearest_node(0.25), x2 = grid.nearest_node(0.75);
    std::vector<double> raw(grid.size());
    for (std::size_t y = 0; y < grid.size(); ++y)
      raw[y] = std::min(sec.h(x1, y), sec.h(x2, y));
    Potential psi_par = envelope(Potential(std::move(raw)), t_short);
    CoincidenceReport r2 = short_time_coincidence(m, psi_par, grid, 0.0, t_short);
    c.cert("coincidence-parabolas",
           "short horizons: the crossing of two smooth cost sections is detected "
           "identically by both singular notions",
           r2.coincide && r2.pairing_ok,
           json{{"sing", r2.sing.size()},
                {"sing_c", r2.sing_c.size()},
                {"unmatched", r2.unmatched}});
  }

  // Long horizons: only the one-sided inclusion survives.
  std::mt19937_64 rng(c.seed);
  bool incl_ok = true;
  double worst_landing = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  json incl_rows = json::array();
  for (double tl : c.cfg.nums("params", "t_long", {1.0})) {
    FundamentalTable tab = build_fundamental_table(m, grid, 0.0, tl);
    CostTable cost(tab.h);
    for (int tr = 0; tr < trials; ++tr) {
      Potential psi = t_minus(random_fourier(grid, rng, 0.3), cost);
      InclusionReport rep = long_time_inclusion(m, psi, grid, 0.0, tl);
      incl_ok = incl_ok && rep.included;
      worst_landing = std::max(worst_landing, rep.max_landing_cells);
      worst_margin = std::min(worst_margin, rep.min_margin);
      incl_rows.push_back(json{{"t", tl},
                               {"trial", tr},
                               {"sing", rep.sing.size()},
                               {"sing_c", rep.sing_c.size()},
                               {"min_margin", rep.min_margin},
                               {"included", rep.included}});
    }
  }
  c.cert("long-horizon-inclusion",
         "at long horizons every multi-valued point is still a kink: the derivative "
         "jump at each flagged node covers the covector gap of its members up to "
         "discretization slack, over randomized concave-type potentials",
         incl_ok,
         json{{"trials", incl_rows.size()},
              {"worst_landing_cells", worst_landing},
              {"min_margin", worst_margin}});

  std::vector<double> gx(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) gx[i] = grid.point(i)[0];
  std::vector<double> flags(grid.size(), 0.0);
  for (std::size_t s : r1.sing) flags[s] = 1.0;
  c.data["grid_x"] = num_array(gx);
  c.data["psi"] = num_array(psi_cone.values);
  c.data["sing_flags"] = num_array(flags);
  c.data["inclusion"] = incl_rows;

  CsvWriter csv({"x", "psi", "kink"});
  for (std::size_t i = 0; i < grid.size(); ++i) csv.row({gx[i], psi_cone[i], flags[i]});
  c.emit("singular.csv", csv.str());
}

// ---------------------------------------------------------------------------
// arnaud: the gradient graph evolves by the Hamiltonian flow.

void run_arnaud(Ctx& c) {
  const double t = c.cfg.num("params", "t", 0.05);
  std::vector<std::string> models = c.cfg.strs("params", "models", {"zero", "cosine"});
  const double amp = c.cfg.num("model", "amplitude", 1.0);
  const int n = int_param(c.cfg, "grid", "n", 64);

  ArnaudReport keep;
  for (const std::string& name : models) {
    LagrangianModel m = LagrangianModel::make(name, amp);
    TorusGrid coarse(1, n), fine(1, 2 * n);
    Potential phi_c = sampled_potential(coarse, c.cfg.str("potential", "kind", "sine"),
                                        c.cfg.num("potential", "amplitude", 0.05),
                                        c.cfg.num("potential", "frequency", 1.0));
    Potential phi_f = sampled_potential(fine, c.cfg.str("potential", "kind", "sine"),
                                        c.cfg.num("potential", "amplitude", 0.05),
                                        c.cfg.num("potential", "frequency", 1.0));
    ArnaudReport r1 = arnaud_graph_check(m, phi_c, coarse, t, 1e-3);
    ArnaudReport r2 = arnaud_graph_check(m, phi_f, fine, t, 5e-4);
    double bound = (5.0 / n) * c.ts;
    double ratio = r1.hausdorff > 1e-12 ? r2.hausdorff / r1.hausdorff : 0.0;
    bool halves = r1.hausdorff <= 1e-12 || (ratio >= 0.3 && ratio <= 0.7);
    c.cert("graph-evolution-" + name,
           "the gradient graph of the evolved potential is the Hamiltonian-flow image "
           "of the initial gradient graph",
           r1.hausdorff <= bound,
           json{{"hausdorff", r1.hausdorff}, {"bound", bound}});
    c.cert("defect-halving-" + name,
           "refining grid and step together roughly halves the graph defect", halves,
           json{{"coarse", r1.hausdorff}, {"fine", r2.hausdorff}, {"ratio", ratio}});
    keep = r1;
  }

  c.data["evolved_x"] = num_array(keep.evolved.x);
  c.data["evolved_p"] = num_array(keep.evolved.p);
  c.data["flowed_x"] = num_array(keep.flowed.x);
  c.data["flowed_p"] = num_array(keep.flowed.p);

  CsvWriter csv({"side", "x", "p"});
  for (std::size_t i = 0; i < keep.evolved.x.size(); ++i)
    csv.row_mixed({"evolved", num17(keep.evolved.x[i]), num17(keep.evolved.p[i])});
  for (std::size_t i = 0; i < keep.flowed.x.size(); ++i)
    csv.row_mixed({"flowed", num17(keep.flowed.x[i]), num17(keep.flowed.p[i])});
  c.emit("graphs.csv", csv.str());
}

// ---------------------------------------------------------------------------
// peierls: stationary barrier, critical value, classes, weak KAM pair.

void run_peierls(Ctx& c) {
  LagrangianModel m = model_from(c.cfg);
  TorusGrid grid = grid_from(c.cfg, 32);
  PeierlsResult pr = compute_peierls_barrier(m, grid);

  bool cv_ok = false;
  json cv_details;
  try {
    CriticalValue cv = mane_critical_value(m, pr, 1e-2 * c.ts);
    cv_ok = true;
    cv_details = json{{"closed_form", cv.value},
                      {"eigen_estimate", cv.eigen_estimate},
                      {"diagonal_estimates", num_array({cv.diagonal_estimates[0],
                                                        cv.diagonal_estimates[1],
                                                        cv.diagonal_estimates[2]})},
                      {"max_discrepancy", cv.max_discrepancy}};
  } catch (const SolverError& e) {
    cv_details = json{{"error", e.what()}};
  }
  c.cert("critical-value",
         "the growth-normalizing energy level agrees across the closed form, the "
         "min-plus eigenvalue, and long-diagonal action rates",
         cv_ok, cv_details);

  double tri = 0.0;
  const std::size_t n = grid.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        tri = std::max(tri, pr.h(x, y) - pr.h(x, z) - pr.h(z, y));
  c.cert("barrier-triangle",
         "the stationary barrier satisfies the triangle inequality exactly",
         tri <= 1e-9 * c.ts, json{{"worst_violation", tri}});

  StaticClassPartition part = aubry_and_static_classes(pr);
  bool aubry_ok;
  if (m.kind == PotentialKind::zero) {
    aubry_ok = part.aubry.size() == n && part.classes.size() == 1;
  } else {
    std::size_t rest = 0;
    double best = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
      auto pt = grid.point(i);
      double v = m.V(pt[0], pt[1]);
      if (v > best) {
        best = v;
        rest = i;
      }
    }
    aubry_ok = part.classes.size() == 1 && part.aubry.size() == 1 && part.aubry[0] == rest;
  }
  c.cert("aubry-classes",
         "the zero set of the diagonal barrier and its pseudo-distance classes match "
         "the mechanical prediction (everything for a flat potential, the resting "
         "point for a cosine well)",
         aubry_ok,
         json{{"aubry_size", part.aubry.size()}, {"classes", part.classes.size()}});

  bool wk_ok = false, incl_ok = false;
  json wk_details;
  Potential um(n, 0.0), up(n, 0.0);
  try {
    WeakKamPair wk = weak_kam_pair(m, pr);
    wk_ok = wk.compose_defect <= 1e-4 * c.ts;
    um = wk.u_minus;
    up = wk.u_plus;
    wk_details = json{{"compose_defect", wk.compose_defect},
                      {"iters_backward", wk.iters_minus},
                      {"iters_forward", wk.iters_plus},
                      {"residual_backward", wk.residual_minus},
                      {"residual_forward", wk.residual_plus}};
    incl_ok = true;
    double worst = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      StaticInclusionReport rep = static_class_in_superdiff(part, pr.h, wk, y);
      incl_ok = incl_ok && rep.included;
      worst = std::max(worst, rep.worst_slack);
    }
    wk_details["worst_class_slack"] = worst;
  } catch (const SolverError& e) {
    wk_details = json{{"error", e.what()}};
  }
  c.cert("weak-kam-conjugacy",
         "the backward fixed point and its forward conjugate form an admissible pair "
         "recovered by the conjugation round trip",
         wk_ok, wk_details);
  c.cert("static-class-superdifferential",
         "for every target, an entire static class realizes the admissibility "
         "equality of the pair",
         incl_ok, json::object());

  std::vector<double> gx(n), hd(n);
  for (std::size_t i = 0; i < n; ++i) {
    gx[i] = grid.point(i)[0];
    hd[i] = pr.h(i, i);
  }
  c.data["grid_x"] = num_array(gx);
  c.data["h_diag"] = num_array(hd);
  c.data["u_minus"] = num_array(um.values);
  c.data["u_plus"] = num_array(up.values);

  CsvWriter csv({"x", "h_diag", "u_minus", "u_plus"});
  for (std::size_t i = 0; i < n; ++i) csv.row({gx[i], hd[i], um[i], up[i]});
  c.emit("stationary.csv", csv.str());
}

// ---------------------------------------------------------------------------
// rlo: the lifted operators on measures reduce to pointwise evolution.

void run_rlo(Ctx& c) {
  LagrangianModel m = model_from(c.cfg);
  TorusGrid grid = grid_from(c.cfg, 64);
  const int trials = int_param(c.cfg, "params", "trials", 3);
  std::vector<double> t_list = c.cfg.nums("params", "t_list", {0.1, 0.5, 1.0});
  std::mt19937_64 rng(c.seed);

  double worst_expr = 0.0, worst_el = 0.0;
  double worst_comp = 0.0;
  bool all_cert = true, mass_ok = true;
  PathEnsemble keep;
  for (int tr = 0; tr < trials; ++tr) {
    Potential phi = random_fourier(grid, rng, 0.1);
    ProbMeasure nu = random_atoms(grid, rng, 4);
    for (double t : t_list) {
      LiftedResult pm = p_minus(m, phi, nu, grid, t);
      worst_expr = std::max(worst_expr, pm.max_expr_gap);
      all_cert = all_cert && pm.certified;
      worst_comp = std::min(worst_comp, pm.competitor_min_excess);
      EulerLagrangeReport el = euler_lagrange_slice_check(m, pm.ensemble);
      worst_el = std::max(worst_el, el.max_residual);
      mass_ok = mass_ok && el.slices_mass_ok;
      keep = std::move(pm.ensemble);
    }
  }

  Potential phi_p = random_fourier(grid, rng, 0.1);
  ProbMeasure mu_p = random_atoms(grid, rng, 3);
  LiftedResult pp = p_plus(m, phi_p, mu_p, grid, t_list.front());

  c.cert("lift-identity",
         "the operator lifted to measures equals the integral of the pointwise "
         "evolution, across its optimal-measure, per-curve and per-slice forms",
         all_cert && worst_expr <= 1e-6 * c.ts,
         json{{"worst_expression_gap", worst_expr}, {"tolerance", 1e-6 * c.ts}});
  c.cert("equation-of-motion",
         "every minimizing curve satisfies the mechanical equation of motion, and "
         "time slices carry unit mass",
         worst_el <= 1e-4 * c.ts && mass_ok,
         json{{"worst_residual", worst_el}, {"tolerance", 1e-4 * c.ts}});
  c.cert("no-better-competitor",
         "no sampled competitor measure beats the constructed witness", worst_comp >= -1e-8 * c.ts,
         json{{"worst_excess", worst_comp}});
  c.cert("mirror-operator", "the maximizing twin certifies the mirrored identity",
         pp.certified, json{{"gap", pp.max_expr_gap}});

  // Persist a thinned copy of the last ensemble for plots and the CSV export.
  json curves = json::array();
  CsvWriter csv({"curve_id", "s", "x", "v", "weight"});
  for (std::size_t ci = 0; ci < keep.curves.size(); ++ci) {
    const PathCurve& cu = keep.curves[ci];
    const std::size_t stride = std::max<std::size_t>(1, cu.orbit.t.size() / 100);
    json s = json::array(), x = json::array(), v = json::array();
    for (std::size_t k = 0; k < cu.orbit.t.size(); k += stride) {
      s.push_back(keep.t1 + cu.orbit.t[k]);
      x.push_back(wrap_unit(cu.orbit.x[k]));
      v.push_back(cu.orbit.v[k]);
      csv.row({double(ci), keep.t1 + cu.orbit.t[k], wrap_unit(cu.orbit.x[k]),
               cu.orbit.v[k], cu.weight});
    }
    curves.push_back(
        json{{"weight", cu.weight}, {"s", s}, {"x", x}, {"v", v}});
  }
  c.data["curves"] = curves;
  c.emit("ensemble.csv", csv.str());
}

}  // namespace

bool ScenarioResult::all_passed() const {
  for (const Certificate& c : certificates)
    if (!c.pass) return false;
  return true;
}

std::vector<std::string> ScenarioResult::failing() const {
  std::vector<std::string> out;
  for (const Certificate& c : certificates)
    if (!c.pass) out.push_back(c.name);
  return out;
}

ScenarioResult run_scenario(const std::filesystem::path& config_path,
                            const ScenarioOptions& opts) {
  if (!std::filesystem::exists(config_path))
    throw DomainError("scenario: missing config file: " + config_path.string());
  Toml cfg = Toml::parse_file(config_path.string());

  ScenarioResult res;
  res.name = cfg.str("scenario", "name", config_path.stem().string());
  res.kind = cfg.str_req("scenario", "kind");
  res.seed = opts.seed_override >= 0 ? std::uint64_t(opts.seed_override)
                                     : std::uint64_t(cfg.num("scenario", "seed", 12345));
  res.tol_scale = opts.tol_scale * cfg.num("scenario", "tol_scale", 1.0);
  if (!(res.tol_scale > 0)) throw DomainError("scenario: tol_scale must be positive");

  std::filesystem::create_directories(opts.out_dir);
  Ctx ctx{cfg, opts.out_dir, res.seed, res.tol_scale, opts.quiet, &res, json::object()};
  ctx.note("scenario '" + res.name + "' (" + res.kind + "), seed " +
           std::to_string(res.seed));

  using Runner = void (*)(Ctx&);
  Runner runner = nullptr;
  if (res.kind == "transform") runner = run_transform;
  else if (res.kind == "ot") runner = run_ot;
  else if (res.kind == "dirac") runner = run_dirac;
  else if (res.kind == "net") runner = run_net;
  else if (res.kind == "singular") runner = run_singular;
  else if (res.kind == "arnaud") runner = run_arnaud;
  else if (res.kind == "peierls") runner = run_peierls;
  else if (res.kind == "rlo") runner = run_rlo;
  else throw DomainError("scenario: unknown kind: " + res.kind);

  try {
    runner(ctx);
  } catch (const SolverError& e) {
    ctx.cert("run-completed", "all solvers in the scenario ran to completion", false,
             json{{"error", e.what()}});
  } catch (const IntegrationError& e) {
    ctx.cert("run-completed", "all solvers in the scenario ran to completion", false,
             json{{"error", e.what()}});
  }

  json certs = json::array();
  for (const Certificate& cert : res.certificates)
    certs.push_back(json{{"name", cert.name},
                         {"statement", cert.statement},
                         {"pass", cert.pass},
                         {"details", cert.details}});
  res.results = json{{"scenario", res.name},
                     {"kind", res.kind},
                     {"seed", res.seed},
                     {"tol_scale", res.tol_scale},
                     {"certificates", certs},
                     {"data", ctx.data}};
  save_json(opts.out_dir / "results.json", res.results);
  res.outputs.push_back("results.json");

  for (const std::string& f : emit_plotdata(res.results, res.kind, opts.out_dir))
    res.outputs.push_back(f);

  json mcerts = json::array();
  for (const Certificate& cert : res.certificates)
    mcerts.push_back(json{{"name", cert.name}, {"pass", cert.pass}});
  json manifest{{"scenario", res.name},
                {"kind", res.kind},
                {"config_file", config_path.filename().string()},
                {"seed", res.seed},
                {"tol_scale", res.tol_scale},
                {"certificates", mcerts},
                {"outputs", res.outputs}};
  save_json(opts.out_dir / "manifest.json", manifest);

  if (res.all_passed()) {
    ctx.note("all certificates passed");
  } else {
    std::string s;
    for (const std::string& f : res.failing()) s += (s.empty() ? "" : ", ") + f;
    ctx.note("FAILING certificates: " + s);
  }
  return res;
}

std::vector<ScenarioInfo> list_scenarios(const std::filesystem::path& dir) {
  std::vector<ScenarioInfo> out;
  if (!std::filesystem::is_directory(dir)) return out;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".toml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    ScenarioInfo info;
    info.file = f;
    try {
      Toml cfg = Toml::parse_file(f.string());
      info.name = cfg.str("scenario", "name", f.stem().string());
      info.kind = cfg.str_req("scenario", "kind");
      info.description = cfg.str("scenario", "description", "");
      info.ok = true;
    } catch (const DomainError& e) {
      info.name = f.stem().string();
      info.error = e.what();
    }
    out.push_back(std::move(info));
  }
  return out;
}

namespace {

std::string dat_rows(const json& cols_list) {
  // cols_list: array of equally long numeric arrays -> whitespace table.
  std::string out;
  if (cols_list.empty()) return out;
  std::size_t rows = cols_list[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    std::string line;
    for (const auto& col : cols_list) {
      if (!line.empty()) line += " ";
      line += num17(col[r].get<double>());
    }
    out += line + "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DomainError("plot: cannot write " + p.string());
  f << content;
}

}  // namespace

std::vector<std::string> emit_plotdata(const json& results, const std::string& kind,
                                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const json& d = results.at("data");
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& content) {
    write_text(out_dir / name, content);
    written.push_back(name);
  };

  if (kind == "transform") {
    json trial = json::array(), idem = json::array();
    for (const auto& row : d.at("trials")) {
      trial.push_back(double(row.at("trial").get<int>()));
      idem.push_back(row.at("idem").get<double>());
    }
    put("defects.dat", dat_rows(json::array({trial, idem})));
  } else if (kind == "ot") {
    json idx = json::array(), value = json::array(), gap = json::array();
    for (const auto& row : d.at("instances")) {
      idx.push_back(double(row.at("instance").get<int>()));
      value.push_back(row.at("value").get<double>());
      gap.push_back(row.at("gap").get<double>());
    }
    put("instances.dat", dat_rows(json::array({idx, value, gap})));
  } else if (kind == "dirac") {
    put("potential.dat", dat_rows(json::array({d.at("grid_x"), d.at("psi")})));
  } else if (kind == "net") {
    json n = json::array(), w1 = json::array(), value = json::array();
    for (const auto& row : d.at("stages")) {
      n.push_back(double(row.at("n").get<int>()));
      w1.push_back(row.at("w1").get<double>());
      value.push_back(row.at("value").get<double>());
    }
    put("convergence.dat", dat_rows(json::array({n, w1, value})));
  } else if (kind == "singular") {
    put("singular.dat",
        dat_rows(json::array({d.at("grid_x"), d.at("psi"), d.at("sing_flags")})));
  } else if (kind == "arnaud") {
    put("graph.dat", dat_rows(json::array({d.at("evolved_x"), d.at("evolved_p")})));
    put("graph_flowed.dat",
        dat_rows(json::array({d.at("flowed_x"), d.at("flowed_p")})));
  } else if (kind == "peierls") {
    put("barrier.dat", dat_rows(json::array({d.at("grid_x"), d.at("h_diag")})));
    put("weak_kam.dat",
        dat_rows(json::array({d.at("grid_x"), d.at("u_minus"), d.at("u_plus")})));
  } else if (kind == "rlo") {
    std::string out;
    for (const auto& cu : d.at("curves")) {
      out += dat_rows(json::array({cu.at("s"), cu.at("x")}));
      out += "\n";  // gnuplot block separator between curves
    }
    put("curves.dat", out);
  } else {
    throw DomainError("plot: unknown scenario kind: " + kind);
  }
  return written;
}

}  // namespace wkot
