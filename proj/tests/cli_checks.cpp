// End-to-end checks of the scenario runner binary: exit-code taxonomy
// (0 pass / 1 certificate failure / 2 config problems), artifact presence,
// and byte-level determinism of repeated runs.
//
// argv[1] = path to the scenario binary, argv[2] = bundled scenario dir.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("cli-checks: %-28s %s%s%s\n", name.c_str(), ok ? "ok" : "FAIL",
              detail.empty() ? "" : "  ", detail.c_str());
  if (!ok) ++failures;
}

int run(const std::string& cmd) {
  int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: cli_checks <scenario-binary> <scenario-dir>\n");
    return 2;
  }
  const fs::path bin = argv[1];
  const fs::path scen = argv[2];
  const fs::path work = fs::temp_directory_path() / "wkot_cli_checks";
  fs::remove_all(work);
  fs::create_directories(work);

  // Passing scenario: exit 0 and the standard artifacts on disk.
  {
    const fs::path out = work / "transform_a";
    int rc = run(q(bin) + " run --config " + q(scen / "transform.toml") +
                 " --out " + q(out) + " --quiet");
    report("transform exit code", rc == 0, "got " + std::to_string(rc));
    report("results.json written", fs::is_regular_file(out / "results.json"));
    report("manifest.json written", fs::is_regular_file(out / "manifest.json"));
  }

  // Deliberately failing scenario: a certificate failure is exit 1, not 2.
  {
    int rc = run(q(bin) + " run --config " + q(scen / "ot_perturbed.toml") +
                 " --out " + q(work / "perturbed") + " --quiet");
    report("perturbed dual exits 1", rc == 1, "got " + std::to_string(rc));
  }

  // Config problems are exit 2: missing file, malformed file, unknown kind.
  {
    int rc = run(q(bin) + " run --config " + q(work / "nope.toml") + " --out " +
                 q(work / "x1") + " --quiet");
    report("missing config exits 2", rc == 2, "got " + std::to_string(rc));

    const fs::path bad = work / "bad.toml";
    std::ofstream(bad) << "[scenario]\nthis line has no equals sign\n";
    rc = run(q(bin) + " run --config " + q(bad) + " --out " + q(work / "x2") +
             " --quiet");
    report("malformed config exits 2", rc == 2, "got " + std::to_string(rc));

    const fs::path unk = work / "unknown.toml";
    std::ofstream(unk) << "[scenario]\nname = \"u\"\nkind = \"frobnicate\"\n";
    rc = run(q(bin) + " run --config " + q(unk) + " --out " + q(work / "x3") +
             " --quiet");
    report("unknown kind exits 2", rc == 2, "got " + std::to_string(rc));
  }

  // Determinism: the same config and seed must reproduce every artifact
  // byte for byte (results, manifest, CSV, plot data).
  {
    const fs::path a = work / "transform_a";  // reuse the first run
    const fs::path b = work / "transform_b";
    int rc = run(q(bin) + " run --config " + q(scen / "transform.toml") +
                 " --out " + q(b) + " --quiet");
    bool same = rc == 0;
    std::string detail;
    std::size_t count_a = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      ++count_a;
      const fs::path twin = b / e.path().filename();
      if (!fs::is_regular_file(twin) || slurp(e.path()) != slurp(twin)) {
        same = false;
        detail = e.path().filename().string() + " differs";
        break;
      }
    }
    std::size_t count_b = 0;
    for (const auto& e : fs::directory_iterator(b))
      if (e.is_regular_file()) ++count_b;
    if (same && count_a != count_b) {
      same = false;
      detail = "artifact counts differ";
    }
    report("repeat run identical", same, detail);
  }

  // The list subcommand sees the bundled configs.
  {
    int rc = run(q(bin) + " list --dir " + q(scen));
    report("list succeeds", rc == 0, "got " + std::to_string(rc));
  }

  fs::remove_all(work);
  if (failures) std::printf("cli-checks: %d check(s) failed\n", failures);
  return failures ? 1 : 0;
}
