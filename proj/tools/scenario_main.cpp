// Scenario runner: executes TOML-described experiments against the core
// solvers and writes deterministic artifacts (results, manifest, CSV tables,
// gnuplot data).  Exit codes: 0 all certificates pass, 1 a certificate
// failed, 2 configuration problems.

#include "wkot/io.hpp"
#include "wkot/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#ifndef WKOT_SCENARIO_DIR
#define WKOT_SCENARIO_DIR "scenarios"
#endif

using namespace wkot;

int main(int argc, char** argv) {
  CLI::App app{"scenario runner for the transport / weak KAM toolkit"};
  app.require_subcommand(1);

  std::string config, out_dir = "out", dir = WKOT_SCENARIO_DIR;
  std::string results_path, kind_override;
  long long seed = -1;
  double tol_scale = 1.0;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "run one scenario config");
  run->add_option("--config", config, "scenario TOML file")->required();
  run->add_option("--out", out_dir, "output directory for artifacts");
  run->add_option("--seed", seed, "override the config RNG seed");
  run->add_option("--tol-scale", tol_scale, "scale all certificate tolerances")
      ->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "suppress progress lines");

  CLI::App* list = app.add_subcommand("list", "list bundled scenario configs");
  list->add_option("--dir", dir, "scenario directory to scan");

  CLI::App* plot = app.add_subcommand("plot", "re-emit plot data from a results file");
  plot->add_option("--results", results_path, "results.json from a previous run")
      ->required();
  plot->add_option("--out", out_dir, "output directory for the .dat files");
  plot->add_option("--kind", kind_override, "override the kind recorded in the results");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ScenarioOptions opts;
      opts.out_dir = out_dir;
      opts.seed_override = seed;
      opts.tol_scale = tol_scale;
      opts.quiet = quiet;
      ScenarioResult res = run_scenario(config, opts);
      return res.all_passed() ? 0 : 1;
    }
    if (list->parsed()) {
      auto infos = list_scenarios(dir);
      if (infos.empty()) {
        std::printf("no scenarios found in %s\n", dir.c_str());
        return 0;
      }
      for (const ScenarioInfo& info : infos) {
        if (info.ok)
          std::printf("%-16s %-10s %s%s%s\n", info.name.c_str(), info.kind.c_str(),
                      info.file.filename().string().c_str(),
                      info.description.empty() ? "" : "  -- ",
                      info.description.c_str());
        else
          std::printf("%-16s %-10s %s  [PARSE ERROR: %s]\n", info.name.c_str(),
                      "?", info.file.filename().string().c_str(), info.error.c_str());
      }
      return 0;
    }
    if (plot->parsed()) {
      json results = load_json(results_path);
      std::string kind =
          kind_override.empty() ? results.at("kind").get<std::string>() : kind_override;
      for (const std::string& f : emit_plotdata(results, kind, out_dir))
        std::printf("wrote %s\n", (out_dir + "/" + f).c_str());
      return 0;
    }
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
