#include "wkot/space.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

namespace wkot {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // guard against floor rounding at negative epsilons
  return r;
}

double signed_diff(double a, double b) {
  double d = a - b;
  d -= std::round(d);
  if (d <= -0.5) d += 1.0;
  return d;
}

void validate_metric(const Matrix& metric, double tol) {
  if (metric.rows != metric.cols) throw DomainError("metric must be square");
  const std::size_t n = metric.rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(metric(i, i)) > tol) throw DomainError("metric diagonal must vanish");
    for (std::size_t j = 0; j < n; ++j) {
      const double d = metric(i, j);
      if (!std::isfinite(d) || d < -tol) throw DomainError("metric entries must be finite and nonnegative");
      if (std::abs(d - metric(j, i)) > tol) throw DomainError("metric must be symmetric");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (metric(i, j) > metric(i, k) + metric(k, j) + tol)
          throw DomainError("metric violates the triangle inequality");
}

FiniteSpace::FiniteSpace(std::vector<std::string> labels_, Matrix metric_,
                         std::vector<std::vector<double>> coords_)
    : labels(std::move(labels_)), coords(std::move(coords_)), metric(std::move(metric_)) {
  if (labels.empty()) throw DomainError("FiniteSpace needs at least one point");
  std::unordered_set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw DomainError("FiniteSpace labels must be unique");
  if (!coords.empty() && coords.size() != labels.size())
    throw DomainError("FiniteSpace coords must be empty or one per point");
  if (metric.rows != labels.size()) throw DomainError("FiniteSpace metric size mismatch");
  validate_metric(metric);
}

TorusGrid::TorusGrid(int dim_, int n_) : dim(dim_), n(n_) {
  if (dim != 1 && dim != 2) throw DomainError("TorusGrid dim must be 1 or 2");
  if (n < 8) throw DomainError("TorusGrid needs n >= 8 per axis");
}

std::size_t TorusGrid::flatten(long i, long j) const {
  auto wrap = [this](long k) {
    long r = k % n;
    if (r < 0) r += n;
    return static_cast<std::size_t>(r);
  };
  if (dim == 1) return wrap(i);
  return wrap(i) * std::size_t(n) + wrap(j);
}

std::array<int, 2> TorusGrid::axes(std::size_t idx) const {
  if (idx >= size()) throw DomainError("TorusGrid index out of range");
  if (dim == 1) return {int(idx), 0};
  return {int(idx / std::size_t(n)), int(idx % std::size_t(n))};
}

std::array<double, 2> TorusGrid::point(std::size_t idx) const {
  auto ij = axes(idx);
  return {ij[0] * spacing(), ij[1] * spacing()};
}

std::size_t TorusGrid::nearest_node(double x, double y) const {
  long i = std::lround(wrap_unit(x) * n);
  long j = std::lround(wrap_unit(y) * n);
  return flatten(i, dim == 2 ? j : 0);
}

double TorusGrid::distance(std::size_t a, std::size_t b) const {
  auto pa = point(a), pb = point(b);
  double dx = signed_diff(pa[0], pb[0]);
  if (dim == 1) return std::abs(dx);
  double dy = signed_diff(pa[1], pb[1]);
  return std::sqrt(dx * dx + dy * dy);
}

std::vector<std::size_t> TorusGrid::neighbors(std::size_t idx) const {
  auto ij = axes(idx);
  std::vector<std::size_t> out;
  out.push_back(flatten(ij[0] - 1, ij[1]));
  out.push_back(flatten(ij[0] + 1, ij[1]));
  if (dim == 2) {
    out.push_back(flatten(ij[0], ij[1] - 1));
    out.push_back(flatten(ij[0], ij[1] + 1));
  }
  return out;
}

Matrix TorusGrid::metric_table() const {
  const std::size_t m = size();
  Matrix table(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) table(a, b) = distance(a, b);
  return table;
}

Potential::Potential(std::vector<double> v) : values(std::move(v)) {
  for (double x : values)
    if (!std::isfinite(x)) throw DomainError("Potential values must be finite");
}

Potential::Potential(std::size_t n, double fill) : values(n, fill) {}

ProbMeasure::ProbMeasure(std::vector<double> w) : weights(std::move(w)) {
  if (weights.empty()) throw DomainError("ProbMeasure needs at least one point");
  double sum = 0.0;
  for (double& x : weights) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("ProbMeasure weights must be finite and nonnegative");
    if (x < 1e-15) x = 0.0;  // flush solver round-off so support is exact
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("ProbMeasure weights must sum to 1 within 1e-12");
}

ProbMeasure ProbMeasure::dirac(std::size_t i, std::size_t n) {
  std::vector<double> w(n, 0.0);
  if (i >= n) throw DomainError("dirac index out of range");
  w[i] = 1.0;
  return ProbMeasure(std::move(w));
}

ProbMeasure ProbMeasure::uniform(std::size_t n) {
  return ProbMeasure(std::vector<double>(n, 1.0 / double(n)));
}

std::vector<std::size_t> ProbMeasure::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) s.push_back(i);
  return s;
}

CostTable::CostTable(Matrix m) : values(std::move(m)) {
  if (values.rows == 0 || values.cols == 0) throw DomainError("CostTable must be nonempty");
  if (!all_finite(values)) throw DomainError("CostTable entries must be finite");
}

TransportPlan::TransportPlan(Matrix m) : matrix(std::move(m)) {
  if (matrix.rows == 0 || matrix.cols == 0) throw DomainError("TransportPlan must be nonempty");
  for (double v : matrix.data)
    if (!std::isfinite(v) || v < 0.0) throw DomainError("TransportPlan entries must be finite and nonnegative");
}

std::vector<std::pair<std::size_t, std::size_t>> TransportPlan::support() const {
  std::vector<std::pair<std::size_t, std::size_t>> s;
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (matrix(i, j) > 0.0) s.emplace_back(i, j);
  return s;
}

ProbMeasure pushforward(const std::vector<long>& f, const ProbMeasure& m,
                        std::size_t target_size) {
  if (f.size() != m.size()) throw DomainError("pushforward: map size mismatch");
  std::vector<double> out(target_size, 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] <= 0.0) continue;
    const long z = f[i];
    if (z < 0 || std::size_t(z) >= target_size)
      throw DomainError("pushforward: support point " + std::to_string(i) + " is unmapped");
    out[std::size_t(z)] += m[i];
  }
  return ProbMeasure(std::move(out));
}

std::pair<ProbMeasure, ProbMeasure> plan_marginals(const TransportPlan& plan) {
  std::vector<double> row(plan.rows(), 0.0), col(plan.cols(), 0.0);
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t j = 0; j < plan.cols(); ++j) {
      row[i] += plan(i, j);
      col[j] += plan(i, j);
    }
  return {ProbMeasure(std::move(row)), ProbMeasure(std::move(col))};
}

bool is_coupling(const TransportPlan& plan, const ProbMeasure& mu,
                 const ProbMeasure& nu, double tol) {
  if (plan.rows() != mu.size() || plan.cols() != nu.size()) return false;
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < plan.cols(); ++j) s += plan(i, j);
    if (std::abs(s - mu[i]) > tol) return false;
  }
  for (std::size_t j = 0; j < plan.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < plan.rows(); ++i) s += plan(i, j);
    if (std::abs(s - nu[j]) > tol) return false;
  }
  return true;
}

bool projected_support_check(const TransportPlan& plan) {
  auto [mu, nu] = plan_marginals(plan);
  std::set<std::size_t> px, py;
  for (auto [i, j] : plan.support()) {
    px.insert(i);
    py.insert(j);
  }
  auto sx = mu.support();
  auto sy = nu.support();
  return px == std::set<std::size_t>(sx.begin(), sx.end()) &&
         py == std::set<std::size_t>(sy.begin(), sy.end());
}

TransportPlan product_measure(const ProbMeasure& m1, const ProbMeasure& m2) {
  Matrix m(m1.size(), m2.size());
  for (std::size_t i = 0; i < m1.size(); ++i)
    for (std::size_t j = 0; j < m2.size(); ++j) m(i, j) = m1[i] * m2[j];
  return TransportPlan(std::move(m));
}

double integrate(const Potential& phi, const ProbMeasure& m) {
  if (phi.size() != m.size()) throw DomainError("integrate: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += phi[i] * m[i];
  return s;
}

}  // namespace wkot
