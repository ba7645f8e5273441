#pragma once

// Exact integer transportation solver: successive shortest augmenting paths
// with Johnson potentials over the dense bipartite graph.  All arithmetic is
// integral, so optimality certificates (complementary slackness) are exact.

#include "wkot/common.hpp"

#include <cstdint>
#include <vector>

namespace wkot {

struct FlowSolution {
  MatrixT<long long> flow;
  std::vector<long long> pot_row;  // optimal row potentials
  std::vector<long long> pot_col;  // optimal column potentials
  __int128 objective = 0;          // sum of flow * cost

  // Exact complementary slackness: every positive flow arc has zero reduced
  // cost and every arc has nonnegative reduced cost.
  long long max_reduced_cost_violation(const MatrixT<long long>& cost) const;
};

// Solves min sum f(i,j) c(i,j) with row sums = supply, column sums = demand
// (sums must match); supplies/demands nonnegative.  Throws DomainError on
// malformed input.
FlowSolution solve_transport(const MatrixT<long long>& cost,
                             const std::vector<long long>& supply,
                             const std::vector<long long>& demand);

// Scales nonnegative weights to integers summing exactly to `total`
// (largest-remainder rounding); zero weights stay exactly zero.
std::vector<long long> largest_remainder_scale(const std::vector<double>& weights,
                                               long long total);

}  // namespace wkot
