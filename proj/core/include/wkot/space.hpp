#pragma once

// Finite metric spaces, flat torus grids, potentials, probability measures,
// cost tables and transport plans.  Everything is immutable after construction
// and validated on entry; all other modules build on these types.

#include "wkot/common.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace wkot {

// Wraps a coordinate into the fundamental domain [0, 1).
double wrap_unit(double x);

// Signed representative of a - b modulo 1, in (-1/2, 1/2].
double signed_diff(double a, double b);

// Throws DomainError unless `metric` is symmetric, nonnegative, has zero
// diagonal, and satisfies the triangle inequality within `tol`.
void validate_metric(const Matrix& metric, double tol = 1e-12);

struct FiniteSpace {
  std::vector<std::string> labels;               // unique
  std::vector<std::vector<double>> coords;       // optional; empty or one per point
  Matrix metric;

  FiniteSpace(std::vector<std::string> labels_, Matrix metric_,
              std::vector<std::vector<double>> coords_ = {});

  std::size_t size() const { return labels.size(); }
};

struct TorusGrid {
  int dim = 1;   // 1 or 2
  int n = 8;     // points per axis, >= 8

  TorusGrid() = default;
  TorusGrid(int dim_, int n_);

  double spacing() const { return 1.0 / n; }
  std::size_t size() const { return dim == 1 ? std::size_t(n) : std::size_t(n) * n; }

  // Index arithmetic wraps modulo n per axis.
  std::size_t flatten(long i, long j = 0) const;
  std::array<int, 2> axes(std::size_t idx) const;          // (i, j); j = 0 in 1D
  std::array<double, 2> point(std::size_t idx) const;      // coordinates in [0,1)^dim
  std::size_t nearest_node(double x, double y = 0.0) const;

  double distance(std::size_t a, std::size_t b) const;     // wrapped Euclidean
  std::vector<std::size_t> neighbors(std::size_t idx) const;  // 2*dim nodes
  Matrix metric_table() const;
};

struct Potential {
  std::vector<double> values;

  Potential() = default;
  explicit Potential(std::vector<double> v);     // validates finiteness
  Potential(std::size_t n, double fill);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

struct ProbMeasure {
  std::vector<double> weights;

  // Validates: nonnegative, sums to 1 within 1e-12.  Weights below 1e-15 are
  // flushed to exact zero so that support comparisons are exact set
  // comparisons (atom tolerance tau_supp = 0).
  explicit ProbMeasure(std::vector<double> w);

  static ProbMeasure dirac(std::size_t i, std::size_t n);
  static ProbMeasure uniform(std::size_t n);

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
  std::vector<std::size_t> support() const;      // strictly positive weights, sorted
};

struct CostTable {
  Matrix values;       // all finite

  CostTable() = default;
  explicit CostTable(Matrix m);

  std::size_t rows() const { return values.rows; }
  std::size_t cols() const { return values.cols; }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
};

struct TransportPlan {
  Matrix matrix;       // nonnegative

  TransportPlan() = default;
  explicit TransportPlan(Matrix m);

  std::size_t rows() const { return matrix.rows; }
  std::size_t cols() const { return matrix.cols; }
  double operator()(std::size_t i, std::size_t j) const { return matrix(i, j); }
  std::vector<std::pair<std::size_t, std::size_t>> support() const;
};

// f[i] = image index of point i, or -1 for unmapped.  Throws DomainError when a
// support point of m is unmapped or maps outside [0, target_size).
ProbMeasure pushforward(const std::vector<long>& f, const ProbMeasure& m,
                        std::size_t target_size);

// (row sums, column sums) of the plan, each a valid ProbMeasure.
std::pair<ProbMeasure, ProbMeasure> plan_marginals(const TransportPlan& plan);

// Whether the plan couples (mu, nu) within tol (default matches the marginal
// invariant 1e-10).
bool is_coupling(const TransportPlan& plan, const ProbMeasure& mu,
                 const ProbMeasure& nu, double tol = 1e-10);

// Checks p_x(supp pi) = supp((p_x)# pi) and the analogous column statement.
bool projected_support_check(const TransportPlan& plan);

TransportPlan product_measure(const ProbMeasure& m1, const ProbMeasure& m2);

double integrate(const Potential& phi, const ProbMeasure& m);

}  // namespace wkot
