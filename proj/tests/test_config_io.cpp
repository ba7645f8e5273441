#include "wkot/config.hpp"
#include "wkot/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

using namespace wkot;

TEST_CASE("config reader covers the supported subset") {
  const std::string text =
      "# top comment\n"
      "[scenario]\n"
      "name = \"demo\"   # trailing comment\n"
      "kind = \"transform\"\n"
      "seed = 42\n"
      "strict = true\n"
      "\n"
      "[params]\n"
      "trials = 12.5\n"
      "t_list = [0.1, 0.5, 1.0]\n"
      "models = [\"zero\", \"cosine\"]\n";
  Toml cfg = Toml::parse(text, "inline");

  CHECK(cfg.str_req("scenario", "name") == "demo");
  CHECK(cfg.num("scenario", "seed", 0.0) == doctest::Approx(42.0));
  CHECK(cfg.flag("scenario", "strict", false));
  CHECK(cfg.num("params", "trials", 0.0) == doctest::Approx(12.5));
  CHECK(cfg.nums("params", "t_list") == std::vector<double>{0.1, 0.5, 1.0});
  CHECK(cfg.strs("params", "models") == std::vector<std::string>{"zero", "cosine"});
  CHECK(cfg.has("scenario", "kind"));
  CHECK_FALSE(cfg.has("scenario", "missing"));
  CHECK(cfg.num("scenario", "missing", -2.5) == doctest::Approx(-2.5));
  CHECK(cfg.sections() == std::vector<std::string>{"params", "scenario"});

  // Required lookups fail loudly, naming the key.
  CHECK_THROWS_WITH_AS(cfg.str_req("scenario", "missing"),
                       doctest::Contains("[scenario] missing"), DomainError);
  // Type mismatches are domain errors too.
  CHECK_THROWS_AS(cfg.num_req("scenario", "name"), DomainError);
}

TEST_CASE("config reader rejects malformed input with a located message") {
  // Keys before any header land in the unnamed section rather than erroring.
  CHECK(Toml::parse("stray = 7\n", "ok").num("", "stray", 0.0) == doctest::Approx(7.0));
  CHECK_THROWS_WITH_AS(Toml::parse("[s]\nnoequals\n", "bad"),
                       doctest::Contains("bad:2"), DomainError);
  CHECK_THROWS_AS(Toml::parse("[s]\nmixed = [1, \"a\"]\n", "bad"), DomainError);
  CHECK_THROWS_AS(Toml::parse("[unterminated\n", "bad"), DomainError);
  CHECK_THROWS_AS(Toml::parse_file("/nonexistent/path.toml"), DomainError);
}

TEST_CASE("json round trips for the core types") {
  Matrix m(2, 3);
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = 0.5 * double(i) - 1.0;
  Matrix m2 = matrix_from_json(to_json(m));
  CHECK(m2.rows == 2);
  CHECK(m2.cols == 3);
  CHECK(m2.data == m.data);

  ProbMeasure mu({0.25, 0.75});
  CHECK(measure_from_json(to_json(mu)).weights == mu.weights);

  Potential phi(std::vector<double>{1.0, -2.0, 3.5});
  CHECK(potential_from_json(to_json(phi)).values == phi.values);

  Matrix cm(2, 2);
  cm(0, 1) = cm(1, 0) = 1.0;
  CostTable c(cm);
  CHECK(cost_from_json(to_json(c)).values.data == cm.data);

  CHECK_THROWS_AS(matrix_from_json(json::array()), DomainError);
  CHECK_THROWS_AS(load_json("/nonexistent/file.json"), DomainError);
}

TEST_CASE("csv writer emits exact decimal cells") {
  CsvWriter w({"a", "b"});
  w.row({1.0, 0.5});
  w.row_mixed({"x", "1e-3"});
  CHECK(w.str() == "a,b\n1,0.5\nx,1e-3\n");
  CHECK_THROWS_AS(w.row({1.0}), DomainError);
}

TEST_CASE("saved json files parse back byte-for-byte stable") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "wkot_io_test";
  fs::create_directories(dir);
  json doc;
  doc["name"] = "stability";
  doc["values"] = {1.0, 2.5, -3.0};
  save_json(dir / "a.json", doc);
  save_json(dir / "b.json", doc);
  CHECK(load_json(dir / "a.json") == load_json(dir / "b.json"));
  fs::remove_all(dir);
}
