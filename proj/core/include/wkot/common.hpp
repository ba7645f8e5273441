#pragma once

// Shared small types: dense row-major matrices (templated so the order-theoretic
// operators can run over exact rational scalars), error taxonomy, numeric
// formatting helpers and a row-chunk parallel loop honoring WEAKKAM_OT_THREADS.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace wkot {

// Input violated a precondition (shape mismatch, bad weights, bad config value).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An iterative routine failed to converge or a solver could not certify.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A trajectory or table entry became non-finite.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
struct MatrixT {
  std::size_t rows = 0, cols = 0;
  std::vector<T> data;

  MatrixT() = default;
  MatrixT(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), data(r * c, fill) {}

  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool same_shape(const MatrixT& o) const { return rows == o.rows && cols == o.cols; }
};

using Matrix = MatrixT<double>;

inline double max_abs(const Matrix& m) {
  double r = 0.0;
  for (double v : m.data) r = std::max(r, std::abs(v));
  return r;
}

inline double max_abs(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

inline bool all_finite(const Matrix& m) {
  return std::all_of(m.data.begin(), m.data.end(), [](double v) { return std::isfinite(v); });
}

// (A o B)(i,j) = min_k A(i,k) + B(k,j); the composition law for value tables.
Matrix min_plus(const Matrix& a, const Matrix& b);

// Minimum cycle mean of a dense cost matrix (Karp).  Used both as the discrete
// critical value and to normalize value tables so no cycle is negative.
double min_cycle_mean(const Matrix& a);

// Shortest-path closure min_{k>=1} A^k under min-plus, by repeated squaring
// combined with elementwise min.  Requires min cycle mean >= 0 to be stable.
Matrix min_plus_closure(const Matrix& a, int max_doublings = 12);

// 17 significant digits: round-trips doubles exactly in decimal.
inline std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double sq(double x) { return x * x; }

// Thread budget: WEAKKAM_OT_THREADS caps the worker count (<=0 or unset means
// hardware concurrency).
unsigned thread_budget();

// Splits [0, n) into contiguous chunks executed on worker threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wkot
