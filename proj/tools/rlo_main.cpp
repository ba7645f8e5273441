// Command line front end for the lifted evolution operators on measures.

#include "wkot/io.hpp"
#include "wkot/model.hpp"
#include "wkot/rlo.hpp"
#include "wkot/space.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

using namespace wkot;

namespace {

// "8:0.25,40:0.75" (weighted) or "8,40" (uniform) as a measure on grid nodes.
ProbMeasure parse_measure(const std::string& s, std::size_t n) {
  std::vector<double> w(n, 0.0);
  std::vector<std::pair<long, double>> entries;
  std::stringstream ss(s);
  std::string tok;
  bool weighted = s.find(':') != std::string::npos;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (weighted) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw DomainError("measure: mixing weighted and unweighted atoms: " + s);
      entries.emplace_back(std::stol(tok.substr(0, colon)),
                           std::stod(tok.substr(colon + 1)));
    } else {
      entries.emplace_back(std::stol(tok), 1.0);
    }
  }
  if (entries.empty()) throw DomainError("measure: no atoms in: " + s);
  double total = 0.0;
  for (auto& [idx, wt] : entries) total += wt;
  for (auto& [idx, wt] : entries) {
    if (idx < 0 || std::size_t(idx) >= n)
      throw DomainError("measure: atom index outside the grid: " + std::to_string(idx));
    w[std::size_t(idx)] += wt / total;
  }
  return ProbMeasure(std::move(w));
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

json vec_to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lifted evolution operators on finitely supported measures"};
  app.require_subcommand(1);

  std::string model = "cosine", pot_kind = "sine", atoms = "8,40", out;
  double amplitude = 0.25, shift = 0.0, pot_amp = 0.1, pot_freq = 1.0, t = 0.5;
  int n = 64, competitors = 100;
  long long seed = 20260823;
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", model, "mechanical model: zero, cosine, shifted_cosine");
    cmd->add_option("--amplitude", amplitude, "model potential amplitude");
    cmd->add_option("--shift", shift, "model potential shift");
    cmd->add_option("--n", n, "grid resolution")->check(CLI::PositiveNumber);
    cmd->add_option("--t", t, "evolution horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--potential", pot_kind, "initial potential: sine, cosine, zero");
    cmd->add_option("--pamp", pot_amp, "initial potential amplitude");
    cmd->add_option("--pfreq", pot_freq, "initial potential frequency");
    cmd->add_option("--atoms", atoms, "fixed measure, e.g. 8:0.25,40:0.75 or 8,40");
    cmd->add_option("--competitors", competitors, "number of sampled competitor measures");
    cmd->add_option("--seed", seed, "competitor sampling seed");
    cmd->add_option("--out", out, "write the result JSON here");
    cmd->add_flag("--quiet", quiet, "suppress the summary lines");
  };

  CLI::App* pminus = app.add_subcommand(
      "pminus", "minimizing lift: best source measure against a fixed target");
  add_common(pminus);
  CLI::App* pplus = app.add_subcommand(
      "pplus", "maximizing lift: best target measure against a fixed source");
  add_common(pplus);

  CLI11_PARSE(app, argc, argv);

  try {
    LagrangianModel m = LagrangianModel::make(model, amplitude, shift);
    TorusGrid grid(1, n);
    Potential phi = grid_potential(grid, pot_kind, pot_amp, pot_freq);
    ProbMeasure fixed = parse_measure(atoms, grid.size());
    RloOptions opts;
    opts.competitors = competitors;
    opts.seed = std::uint64_t(seed);

    LiftedResult r = pminus->parsed() ? p_minus(m, phi, fixed, grid, t, opts)
                                      : p_plus(m, phi, fixed, grid, t, opts);
    if (!quiet) {
      std::printf("value          %s\n", num17(r.value).c_str());
      std::printf("via measure    %s\n", num17(r.expr_measure).c_str());
      std::printf("via curves     %s\n", num17(r.expr_curve).c_str());
      std::printf("via slices     %s\n", num17(r.expr_slice).c_str());
      std::printf("localization   lambda %s, ball %s%s\n", num17(r.lambda_used).c_str(),
                  num17(r.ball_radius).c_str(), r.lambda_enlarged ? " (enlarged)" : "");
      std::printf("certified      %s (worst form gap %s, competitor excess %s)\n",
                  r.certified ? "yes" : "NO", num17(r.max_expr_gap).c_str(),
                  num17(r.competitor_min_excess).c_str());
    }
    if (!out.empty()) {
      json doc{{"value", r.value},
               {"expr_measure", r.expr_measure},
               {"expr_curve", r.expr_curve},
               {"expr_slice", r.expr_slice},
               {"max_expr_gap", r.max_expr_gap},
               {"lambda_used", r.lambda_used},
               {"ball_radius", r.ball_radius},
               {"lambda_enlarged", r.lambda_enlarged},
               {"evolved", vec_to_json(r.evolved.values)},
               {"witness", to_json(r.witness)},
               {"competitor_min_excess", r.competitor_min_excess},
               {"certified", r.certified}};
      save_json(out, doc);
    }
    return r.certified ? 0 : 1;
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
}
