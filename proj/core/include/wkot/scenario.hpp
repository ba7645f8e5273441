#pragma once

// Scenario engine: reads a TOML scenario description, runs the named
// experiment against the core solvers, and emits deterministic artifacts
// (results JSON, CSV tables, gnuplot data, and a run manifest).

#include "wkot/config.hpp"
#include "wkot/io.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wkot {

struct ScenarioOptions {
  std::filesystem::path out_dir = "out";
  std::int64_t seed_override = -1;  // < 0: use the seed from the config
  double tol_scale = 1.0;
  bool quiet = false;
};

struct Certificate {
  std::string name;       // short identifier
  std::string statement;  // the mathematical statement being verified
  bool pass = false;
  json details;
};

struct ScenarioResult {
  std::string name;
  std::string kind;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  std::vector<Certificate> certificates;
  json results;                      // full document, also saved as results.json
  std::vector<std::string> outputs;  // file names written into out_dir

  bool all_passed() const;
  std::vector<std::string> failing() const;
};

// Runs one scenario.  Configuration problems (missing file, parse error,
// unknown kind, bad parameter) throw DomainError; failed verifications are
// reported through the certificate list instead.
ScenarioResult run_scenario(const std::filesystem::path& config_path,
                            const ScenarioOptions& opts = {});

struct ScenarioInfo {
  std::filesystem::path file;
  std::string name;
  std::string kind;
  std::string description;
  bool ok = false;  // parse success
  std::string error;
};

// Scans a directory for *.toml scenarios; parse failures are listed with a
// warning flag rather than thrown.
std::vector<ScenarioInfo> list_scenarios(const std::filesystem::path& dir);

// Writes gnuplot-style .dat files from a results document previously produced
// by run_scenario; returns the file names written.  Unknown kind ->
// DomainError.
std::vector<std::string> emit_plotdata(const json& results, const std::string& kind,
                                       const std::filesystem::path& out_dir);

}  // namespace wkot
