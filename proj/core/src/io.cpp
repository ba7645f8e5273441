#include "wkot/io.hpp"

#include <fstream>
#include <sstream>

namespace wkot {

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw DomainError("matrix JSON must be a nonempty array of arrays");
  Matrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (j[i].size() != m.cols) throw DomainError("matrix JSON rows have unequal lengths");
    for (std::size_t k = 0; k < m.cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json to_json(const FiniteSpace& s) {
  json points = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json p;
    p["label"] = s.labels[i];
    if (!s.coords.empty()) p["coords"] = s.coords[i];
    points.push_back(std::move(p));
  }
  return json{{"points", std::move(points)}, {"metric", to_json(s.metric)}};
}

FiniteSpace finite_space_from_json(const json& j) {
  if (!j.contains("points") || !j.contains("metric"))
    throw DomainError("space JSON needs \"points\" and \"metric\"");
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coords;
  for (const auto& p : j.at("points")) {
    if (p.is_string()) {
      labels.push_back(p.get<std::string>());
    } else {
      labels.push_back(p.at("label").get<std::string>());
      if (p.contains("coords")) coords.push_back(p.at("coords").get<std::vector<double>>());
    }
  }
  if (!coords.empty() && coords.size() != labels.size())
    throw DomainError("space JSON: coords must be given for all points or none");
  return FiniteSpace(std::move(labels), matrix_from_json(j.at("metric")), std::move(coords));
}

json to_json(const ProbMeasure& m) { return json{{"weights", m.weights}}; }

ProbMeasure measure_from_json(const json& j) {
  if (!j.contains("weights")) throw DomainError("measure JSON needs \"weights\"");
  return ProbMeasure(j.at("weights").get<std::vector<double>>());
}

json to_json(const Potential& p) { return json{{"values", p.values}}; }

Potential potential_from_json(const json& j) {
  if (!j.contains("values")) throw DomainError("potential JSON needs \"values\"");
  return Potential(j.at("values").get<std::vector<double>>());
}

json to_json(const CostTable& c) { return json{{"matrix", to_json(c.values)}}; }

CostTable cost_from_json(const json& j) {
  if (!j.contains("matrix")) throw DomainError("cost JSON needs \"matrix\"");
  return CostTable(matrix_from_json(j.at("matrix")));
}

json to_json(const TransportPlan& p) { return json{{"matrix", to_json(p.matrix)}}; }

TransportPlan plan_from_json(const json& j) {
  if (!j.contains("matrix")) throw DomainError("plan JSON needs \"matrix\"");
  return TransportPlan(matrix_from_json(j.at("matrix")));
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DomainError("JSON parse failure in " + path.string() + ": " + e.what());
  }
  return j;
}

void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  buf_ = os.str();
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw DomainError("CSV row width mismatch");
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << num17(values[i]);
  os << "\n";
  buf_ += os.str();
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw DomainError("CSV row width mismatch");
  std::ostringstream os;
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << "\n";
  buf_ += os.str();
}

void CsvWriter::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out << buf_;
}

std::string CsvWriter::str() const { return buf_; }

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::string& row_name, const std::string& col_name,
                      const std::string& value_name) {
  CsvWriter w({row_name, col_name, value_name});
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      w.row_mixed({std::to_string(i), std::to_string(j), num17(m(i, j))});
  w.save(path);
}

}  // namespace wkot
