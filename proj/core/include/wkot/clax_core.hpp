#pragma once

// Scalar-generic kernels for the order-theoretic transform pair
//   (T-)phi(y) = min_x phi(x) + c(x,y),   (T+)psi(x) = max_y psi(y) - c(x,y)
// and the derived argmin/argmax set maps.  Templated so the same code runs in
// floating point (eps-tolerant comparisons) and in exact rational arithmetic
// (eps = 0), which the equivalence tests rely on.

#include "wkot/common.hpp"

#include <cstddef>
#include <vector>

namespace wkot::claxcore {

template <class T>
T tabs(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <class T>
std::vector<T> t_minus(const std::vector<T>& phi, const MatrixT<T>& c) {
  if (phi.size() != c.rows) throw DomainError("t_minus: phi size must match cost rows");
  std::vector<T> out;
  out.reserve(c.cols);
  for (std::size_t y = 0; y < c.cols; ++y) {
    T best = phi[0] + c(0, y);
    for (std::size_t x = 1; x < c.rows; ++x) {
      T v = phi[x] + c(x, y);
      if (v < best) best = v;
    }
    out.push_back(best);
  }
  return out;
}

template <class T>
std::vector<T> t_plus(const std::vector<T>& psi, const MatrixT<T>& c) {
  if (psi.size() != c.cols) throw DomainError("t_plus: psi size must match cost columns");
  std::vector<T> out;
  out.reserve(c.rows);
  for (std::size_t x = 0; x < c.rows; ++x) {
    T best = psi[0] - c(x, 0);
    for (std::size_t y = 1; y < c.cols; ++y) {
      T v = psi[y] - c(x, y);
      if (best < v) best = v;
    }
    out.push_back(best);
  }
  return out;
}

// (T- o T+)psi - psi, pointwise.  Nonnegative by the order lemma.
template <class T>
std::vector<T> commutator_defect(const std::vector<T>& psi, const MatrixT<T>& c) {
  std::vector<T> d = t_minus(t_plus(psi, c), c);
  for (std::size_t y = 0; y < d.size(); ++y) d[y] = d[y] - psi[y];
  return d;
}

// Argmin set of the map defining (T-)phi at target y:
// { x : phi(x) + c(x,y) <= (T-)phi(y) + eps }.
template <class T>
std::vector<std::size_t> subdiff_set(const std::vector<T>& phi, const MatrixT<T>& c,
                                     std::size_t x, const T& eps) {
  if (x >= c.rows) throw DomainError("subdiff_set: index out of range");
  std::vector<T> tm = t_minus(phi, c);
  std::vector<std::size_t> members;
  for (std::size_t y = 0; y < c.cols; ++y)
    if (tabs(phi[x] + c(x, y) - tm[y]) <= eps) members.push_back(y);
  return members;
}

// { x : psi(y) - c(x,y) >= (T+)psi(x) - eps }, the argmax attainment set.
template <class T>
std::vector<std::size_t> superdiff_set(const std::vector<T>& psi, const MatrixT<T>& c,
                                       std::size_t y, const T& eps) {
  if (y >= c.cols) throw DomainError("superdiff_set: index out of range");
  std::vector<T> tp = t_plus(psi, c);
  std::vector<std::size_t> members;
  for (std::size_t x = 0; x < c.rows; ++x)
    if (tabs(psi[y] - c(x, y) - tp[x]) <= eps) members.push_back(x);
  return members;
}

// All superdifferential sets at once (shares the T+ pass).
template <class T>
std::vector<std::vector<std::size_t>> superdiff_sets(const std::vector<T>& psi,
                                                     const MatrixT<T>& c, const T& eps) {
  std::vector<T> tp = t_plus(psi, c);
  std::vector<std::vector<std::size_t>> sets(c.cols);
  for (std::size_t y = 0; y < c.cols; ++y)
    for (std::size_t x = 0; x < c.rows; ++x)
      if (tabs(psi[y] - c(x, y) - tp[x]) <= eps) sets[y].push_back(x);
  return sets;
}

}  // namespace wkot::claxcore
