#include "wkot/mincost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wkot {

namespace {
constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
}

long long FlowSolution::max_reduced_cost_violation(const MatrixT<long long>& cost) const {
  long long worst = 0;
  for (std::size_t i = 0; i < cost.rows; ++i)
    for (std::size_t j = 0; j < cost.cols; ++j) {
      const long long rc = cost(i, j) + pot_row[i] - pot_col[j];
      if (rc < 0) worst = std::max(worst, -rc);
      if (flow(i, j) > 0 && rc != 0) worst = std::max(worst, rc < 0 ? -rc : rc);
    }
  return worst;
}

FlowSolution solve_transport(const MatrixT<long long>& cost,
                             const std::vector<long long>& supply,
                             const std::vector<long long>& demand) {
  const std::size_t nr = cost.rows, nc = cost.cols;
  if (supply.size() != nr || demand.size() != nc)
    throw DomainError("solve_transport: supply/demand sizes do not match the cost matrix");
  long long total_s = 0, total_d = 0;
  for (long long s : supply) {
    if (s < 0) throw DomainError("solve_transport: negative supply");
    total_s += s;
  }
  for (long long d : demand) {
    if (d < 0) throw DomainError("solve_transport: negative demand");
    total_d += d;
  }
  if (total_s != total_d) throw DomainError("solve_transport: supply and demand totals differ");

  FlowSolution sol;
  sol.flow = MatrixT<long long>(nr, nc);
  sol.pot_row.assign(nr, 0);
  sol.pot_col.assign(nc, 0);
  // Column potentials start at the column minima so reduced costs are
  // nonnegative even with negative cost entries.
  for (std::size_t j = 0; j < nc; ++j) {
    long long m = kInf;
    for (std::size_t i = 0; i < nr; ++i) m = std::min(m, cost(i, j));
    sol.pot_col[j] = m;
  }

  std::vector<long long> rem_s = supply, rem_d = demand;
  std::vector<long long> dist_r(nr), dist_c(nc);
  std::vector<char> done_r(nr), done_c(nc);
  std::vector<std::size_t> parent_c(nc);  // row feeding this column on the path
  std::vector<std::size_t> parent_r(nr);  // column feeding this row (backward arc)

  long long moved = 0;
  while (moved < total_s) {
    // Multi-source Dijkstra over reduced costs; nodes are rows and columns.
    std::fill(dist_r.begin(), dist_r.end(), kInf);
    std::fill(dist_c.begin(), dist_c.end(), kInf);
    std::fill(done_r.begin(), done_r.end(), 0);
    std::fill(done_c.begin(), done_c.end(), 0);
    for (std::size_t i = 0; i < nr; ++i)
      if (rem_s[i] > 0) dist_r[i] = 0;

    while (true) {
      // Pick the unfinished node with smallest tentative distance.
      long long best = kInf;
      bool is_row = true;
      std::size_t best_idx = 0;
      for (std::size_t i = 0; i < nr; ++i)
        if (!done_r[i] && dist_r[i] < best) {
          best = dist_r[i];
          is_row = true;
          best_idx = i;
        }
      for (std::size_t j = 0; j < nc; ++j)
        if (!done_c[j] && dist_c[j] < best) {
          best = dist_c[j];
          is_row = false;
          best_idx = j;
        }
      if (best >= kInf) break;
      if (is_row) {
        done_r[best_idx] = 1;
        const std::size_t i = best_idx;
        for (std::size_t j = 0; j < nc; ++j) {
          if (done_c[j]) continue;
          const long long rc = cost(i, j) + sol.pot_row[i] - sol.pot_col[j];
          if (dist_r[i] + rc < dist_c[j]) {
            dist_c[j] = dist_r[i] + rc;
            parent_c[j] = i;
          }
        }
      } else {
        done_c[best_idx] = 1;
        const std::size_t j = best_idx;
        for (std::size_t i = 0; i < nr; ++i) {
          if (done_r[i] || sol.flow(i, j) == 0) continue;
          const long long rc = -(cost(i, j) + sol.pot_row[i] - sol.pot_col[j]);
          if (dist_c[j] + rc < dist_r[i]) {
            dist_r[i] = dist_c[j] + rc;
            parent_r[i] = j;
          }
        }
      }
    }

    // Cheapest reachable column with remaining demand.
    std::size_t target = nc;
    for (std::size_t j = 0; j < nc; ++j)
      if (rem_d[j] > 0 && dist_c[j] < kInf && (target == nc || dist_c[j] < dist_c[target]))
        target = j;
    if (target == nc) throw SolverError("solve_transport: no augmenting path (infeasible)");

    // Bottleneck along the alternating path.
    long long push = rem_d[target];
    {
      std::size_t j = target;
      while (true) {
        const std::size_t i = parent_c[j];
        if (dist_r[i] == 0 && rem_s[i] > 0) {
          push = std::min(push, rem_s[i]);
          break;
        }
        j = parent_r[i];
        push = std::min(push, sol.flow(i, j));
      }
    }
    // Apply the augmentation.
    {
      std::size_t j = target;
      while (true) {
        const std::size_t i = parent_c[j];
        sol.flow(i, j) += push;
        if (dist_r[i] == 0 && rem_s[i] > 0) {
          rem_s[i] -= push;
          break;
        }
        const std::size_t back = parent_r[i];
        sol.flow(i, back) -= push;
        j = back;
      }
      rem_d[target] -= push;
    }
    moved += push;

    // Johnson update, capped at the target distance so reduced costs stay
    // nonnegative on arcs out of unreached nodes too.
    const long long cap = dist_c[target];
    for (std::size_t i = 0; i < nr; ++i) sol.pot_row[i] += std::min(dist_r[i], cap);
    for (std::size_t j = 0; j < nc; ++j) sol.pot_col[j] += std::min(dist_c[j], cap);
  }

  sol.objective = 0;
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      sol.objective += __int128(sol.flow(i, j)) * __int128(cost(i, j));
  return sol;
}

std::vector<long long> largest_remainder_scale(const std::vector<double>& weights,
                                               long long total) {
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0)) throw DomainError("largest_remainder_scale: weights must have positive sum");
  const std::size_t n = weights.size();
  std::vector<long long> out(n, 0);
  std::vector<std::pair<double, std::size_t>> rema;
  long long assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0) throw DomainError("largest_remainder_scale: negative weight");
    const double exact = weights[i] / sum * double(total);
    out[i] = (long long)(std::floor(exact));
    assigned += out[i];
    rema.push_back({exact - std::floor(exact), i});
  }
  std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;  // deterministic tie break
  });
  long long left = total - assigned;
  for (std::size_t k = 0; left > 0 && k < rema.size(); ++k) {
    // Keep exact zeros exact: a zero weight never receives remainder mass.
    if (weights[rema[k].second] == 0.0) continue;
    ++out[rema[k].second];
    --left;
  }
  if (left != 0) throw SolverError("largest_remainder_scale: could not distribute remainder");
  return out;
}

}  // namespace wkot
