#pragma once

// JSON (nlohmann, ordered keys for byte-stable output) and CSV serialization
// for the core types.

#include "wkot/space.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace wkot {

using json = nlohmann::ordered_json;

json to_json(const Matrix& m);                       // [[row], [row], ...]
Matrix matrix_from_json(const json& j);

json to_json(const FiniteSpace& s);                  // {"points": [...], "metric": [[...]]}
FiniteSpace finite_space_from_json(const json& j);

json to_json(const ProbMeasure& m);                  // {"weights": [...]}
ProbMeasure measure_from_json(const json& j);

json to_json(const Potential& p);                    // {"values": [...]}
Potential potential_from_json(const json& j);

json to_json(const CostTable& c);                    // {"matrix": [[...]]}
CostTable cost_from_json(const json& j);

json to_json(const TransportPlan& p);                // {"matrix": [[...]]}
TransportPlan plan_from_json(const json& j);

json load_json(const std::filesystem::path& path);   // DomainError on parse failure
void save_json(const std::filesystem::path& path, const json& j);

// CSV with a header row; every numeric cell printed with 17 significant digits.
struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);
  void save(const std::filesystem::path& path) const;
  std::string str() const;

 private:
  std::string buf_;
  std::size_t width_ = 0;
};

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::string& row_name, const std::string& col_name,
                      const std::string& value_name);

}  // namespace wkot
