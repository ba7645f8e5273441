// Command line front end for the discrete transport solvers: certified
// Kantorovich solutions, the two one-potential reformulations, the
// point-target construction on torus grids, and the net approximation scheme.

#include "wkot/dirac.hpp"
#include "wkot/fundamental.hpp"
#include "wkot/io.hpp"
#include "wkot/kantorovich.hpp"
#include "wkot/model.hpp"
#include "wkot/semiconcave.hpp"
#include "wkot/space.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace wkot;

namespace {

ProbMeasure measure_field(const json& doc, const std::string& key) {
  if (!doc.contains(key))
    throw DomainError("input: missing field '" + key + "'");
  const json& j = doc.at(key);
  if (j.is_array()) return ProbMeasure(j.get<std::vector<double>>());
  return measure_from_json(j);
}

json plan_to_json(const TransportPlan& plan) {
  json rows = json::array();
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < plan.cols(); ++j) r.push_back(plan(i, j));
    rows.push_back(r);
  }
  return rows;
}

json vec_to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::vector<long> parse_index_list(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stol(tok));
  }
  if (out.empty()) throw DomainError("expected a comma separated index list: " + s);
  return out;
}

Potential grid_potential(const TorusGrid& grid, const std::string& kind, double amp,
                         double freq) {
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double x = grid.point(i)[0];
    if (kind == "sine")
      v[i] = amp * std::sin(2.0 * M_PI * freq * x);
    else if (kind == "cosine")
      v[i] = amp * std::cos(2.0 * M_PI * freq * x);
    else if (kind != "zero")
      throw DomainError("unknown potential kind: " + kind);
  }
  return Potential(std::move(v));
}

struct SolveArgs {
  std::string input;
  std::string out;
  bool quiet = false;
};

int cmd_solve(const SolveArgs& a) {
  json doc = load_json(a.input);
  if (!doc.contains("cost")) throw DomainError("input: missing field 'cost'");
  CostTable cost(matrix_from_json(doc.at("cost")));
  ProbMeasure mu = measure_field(doc, "mu"), nu = measure_field(doc, "nu");

  KantorovichResult r = solve_kantorovich(mu, nu, cost);
  json out{{"value", r.value},
           {"plan", plan_to_json(r.plan)},
           {"phi", vec_to_json(r.phi.values)},
           {"psi", vec_to_json(r.psi.values)},
           {"gap", r.gap},
           {"certified", r.certified}};
  if (!a.out.empty()) save_json(a.out, out);
  if (!a.quiet)
    std::printf("value %s  gap %s  certified %s\n", num17(r.value).c_str(),
                num17(r.gap).c_str(), r.certified ? "yes" : "NO");
  if (a.out.empty() && a.quiet) std::printf("%s\n", out.dump(2).c_str());
  return r.certified ? 0 : 1;
}

int cmd_one_potential(const SolveArgs& a, bool minus) {
  json doc = load_json(a.input);
  if (!doc.contains("cost")) throw DomainError("input: missing field 'cost'");
  CostTable cost(matrix_from_json(doc.at("cost")));
  ProbMeasure mu = measure_field(doc, "mu"), nu = measure_field(doc, "nu");

  json out;
  bool ok;
  if (minus) {
    KMinusCert r = solve_K_minus(mu, nu, cost);
    ok = r.certified;
    out = json{{"phi", vec_to_json(r.phi.values)},
               {"evolved_side", r.evolved_side},
               {"plan_side", r.plan_side},
               {"gap", r.gap},
               {"transport_value", r.transport.value},
               {"certified", r.certified}};
  } else {
    KPlusCert r = solve_K_plus(mu, nu, cost);
    ok = r.certified;
    out = json{{"psi", vec_to_json(r.psi.values)},
               {"evolved_side", r.evolved_side},
               {"plan_side", r.plan_side},
               {"gap", r.gap},
               {"transport_value", r.transport.value},
               {"certified", r.certified}};
  }
  if (!a.out.empty()) save_json(a.out, out);
  if (!a.quiet)
    std::printf("%s form: gap %s  certified %s\n", minus ? "min" : "max",
                num17(out.at("gap").get<double>()).c_str(), ok ? "yes" : "NO");
  return ok ? 0 : 1;
}

struct GridArgs {
  std::string model = "cosine";
  double amplitude = 0.25;
  double shift = 0.0;
  int n = 64;
  std::string pot_kind = "sine";
  double pot_amp = 0.05;
  double pot_freq = 1.0;
  std::string out;
  bool quiet = false;
};

int cmd_dirac(const GridArgs& g, double t, long y0_arg) {
  LagrangianModel m = LagrangianModel::make(g.model, g.amplitude, g.shift);
  TorusGrid grid(1, g.n);
  Potential phi = grid_potential(grid, g.pot_kind, g.pot_amp, g.pot_freq);
  std::size_t y0 = y0_arg >= 0 ? std::size_t(y0_arg) : grid.size() / 3;
  if (y0 >= grid.size()) throw DomainError("dirac: --y0 outside the grid");

  FundamentalTable tab = build_fundamental_table(m, grid, 0.0, t);
  Potential psi = t_minus(phi, CostTable(tab.h));
  SuperdiffEstimate est = superdifferential(psi, grid, y0);
  CovectorMeasure rho;
  for (const auto& s : est.d_star) {
    bool dup = false;
    for (double q : rho.p) dup = dup || std::abs(q - s[0]) <= 1e-12;
    if (!dup) rho.p.push_back(s[0]);
  }
  rho.w.assign(rho.p.size(), 1.0 / double(rho.p.size()));

  DiracConstruction dc = dirac_construction(m, phi, grid, y0, t, rho);
  CovectorRecovery rec = recover_covector_measure(m, phi, grid, y0, t, dc.mu);

  json out{{"y0", y0},
           {"t", t},
           {"covectors", vec_to_json(rho.p)},
           {"mu", to_json(dc.mu)},
           {"feet", vec_to_json(dc.feet)},
           {"snap_distance", dc.snap_dist},
           {"certificate_slack", dc.cert_slack},
           {"eps_used", dc.eps_used},
           {"certified", dc.certified},
           {"recovery",
            json{{"covectors", vec_to_json(rec.rho.p)},
                 {"weights", vec_to_json(rec.rho.w)},
                 {"hull", vec_to_json(rec.hull)},
                 {"max_hull_excess", rec.max_hull_excess},
                 {"round_trip_cells", rec.round_trip_cells},
                 {"round_trip_ok", rec.round_trip_ok}}}};
  if (!g.out.empty()) save_json(g.out, out);
  bool ok = dc.certified && rec.round_trip_ok;
  if (!g.quiet)
    std::printf("target node %zu: %zu covector(s), slack %s, round trip %s\n", y0,
                rho.p.size(), num17(dc.cert_slack).c_str(),
                rec.round_trip_ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}

int cmd_net(const GridArgs& g, double t, const std::string& atoms_arg,
            const std::string& schedule_arg) {
  LagrangianModel m = LagrangianModel::make(g.model, g.amplitude, g.shift);
  TorusGrid grid(1, g.n);
  Potential phi = grid_potential(grid, g.pot_kind, g.pot_amp, g.pot_freq);

  std::vector<double> w(grid.size(), 0.0);
  std::vector<long> atoms = parse_index_list(atoms_arg);
  for (long a : atoms) {
    if (a < 0 || std::size_t(a) >= grid.size())
      throw DomainError("net: atom index outside the grid");
    w[std::size_t(a)] += 1.0 / double(atoms.size());
  }
  ProbMeasure nu(std::move(w));

  std::vector<int> schedule;
  for (long v : parse_index_list(schedule_arg)) schedule.push_back(int(v));

  NetReport rep = net_approximation(m, phi, grid, nu, t, schedule);
  bool ok = rep.w1_ok;
  json stages = json::array();
  for (const NetStage& s : rep.stages) {
    ok = ok && s.certified && (s.n < 8 || s.membership_ok);
    stages.push_back(json{{"n", s.n},
                          {"net_size", s.net.size()},
                          {"w1", s.w1},
                          {"value", s.value},
                          {"certified", s.certified},
                          {"membership", s.membership_ok}});
    if (!g.quiet)
      std::printf("n %3d: net %2zu, W1 %s, value %s%s\n", s.n, s.net.size(),
                  num17(s.w1).c_str(), num17(s.value).c_str(),
                  s.certified ? "" : "  [NOT CERTIFIED]");
  }
  json out{{"t", t},
           {"stages", stages},
           {"final_value", rep.final_value},
           {"last_value_change", rep.last_value_change},
           {"w1_ok", rep.w1_ok}};
  if (!g.out.empty()) save_json(g.out, out);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete optimal transport with dual certificates"};
  app.require_subcommand(1);

  SolveArgs sa;
  GridArgs ga;
  double t_dirac = 0.1, t_net = 0.5;
  long y0 = -1;
  std::string atoms = "8,24,40,56", schedule = "2,4,8,16,32";

  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--input", sa.input, "problem JSON with cost, mu, nu")->required();
    cmd->add_option("--out", sa.out, "write the solution JSON here");
    cmd->add_flag("--quiet", sa.quiet, "suppress the summary line");
  };
  CLI::App* solve = app.add_subcommand("solve", "certified Kantorovich solution");
  add_io(solve);
  CLI::App* kminus =
      app.add_subcommand("kminus", "one-potential minimization over the source marginal");
  add_io(kminus);
  CLI::App* kplus =
      app.add_subcommand("kplus", "one-potential maximization over the target marginal");
  add_io(kplus);

  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--model", ga.model, "mechanical model: zero, cosine, shifted_cosine");
    cmd->add_option("--amplitude", ga.amplitude, "potential amplitude of the model");
    cmd->add_option("--shift", ga.shift, "additive shift of the model potential");
    cmd->add_option("--n", ga.n, "grid resolution per axis")->check(CLI::PositiveNumber);
    cmd->add_option("--potential", ga.pot_kind, "initial potential: sine, cosine, zero");
    cmd->add_option("--pamp", ga.pot_amp, "initial potential amplitude");
    cmd->add_option("--pfreq", ga.pot_freq, "initial potential frequency");
    cmd->add_option("--out", ga.out, "write the result JSON here");
    cmd->add_flag("--quiet", ga.quiet, "suppress the summary lines");
  };
  CLI::App* dirac = app.add_subcommand("dirac", "optimal source for a point target");
  add_grid(dirac);
  dirac->add_option("--t", t_dirac, "transport horizon")->check(CLI::PositiveNumber);
  dirac->add_option("--y0", y0, "target node index (default: n/3)");

  CLI::App* net = app.add_subcommand("net", "net approximation of a general target");
  add_grid(net);
  net->add_option("--t", t_net, "transport horizon")->check(CLI::PositiveNumber);
  net->add_option("--atoms", atoms, "target atoms as node indices, comma separated");
  net->add_option("--schedule", schedule, "net fineness schedule, comma separated");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(sa);
    if (kminus->parsed()) return cmd_one_potential(sa, true);
    if (kplus->parsed()) return cmd_one_potential(sa, false);
    if (dirac->parsed()) return cmd_dirac(ga, t_dirac, y0);
    if (net->parsed()) return cmd_net(ga, t_net, atoms, schedule);
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 1;
  } catch (const IntegrationError& e) {
    std::fprintf(stderr, "integration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
