#include "wkot/weak_kam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace wkot {

namespace {

double sup_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  return worst;
}

Matrix elementwise_min(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = std::min(out.data[i], b.data[i]);
  return out;
}

std::size_t resting_node(const LagrangianModel& m, const TorusGrid& grid) {
  // argmax V over the grid; well defined (node 0) for the flat model too.
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto p = grid.point(i);
    double v = m.V(p[0], p[1]);
    if (v > best_v + 1e-15) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

}  // namespace

double PeierlsResult::value(double x, double y) const {
  return h(grid.nearest_node(x), grid.nearest_node(y));
}

Matrix PeierlsResult::pseudo_distance() const {
  const std::size_t n = h.rows;
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = h(i, j) + h(j, i);
  return d;
}

PeierlsResult compute_peierls_barrier(const LagrangianModel& m, const TorusGrid& grid,
                                      const PeierlsOptions& opts) {
  PeierlsResult R;
  R.grid = grid;
  R.c0 = m.critical_value();

  double t_base = opts.t_base;
  if (t_base <= 0) {
    t_base = 8.0;
    while (t_base > m.shoot_horizon() * (1 + 1e-12)) t_base /= 2;
  }
  R.t_base = t_base;

  R.base = build_fundamental_table(m, grid, 0.0, t_base, opts.table);

  // Normalize so the minimal cycle mean is exactly zero: subtracting the
  // min-plus eigenvalue leaves every cycle nonnegative and the resting cycle
  // at zero, which is what makes diagonals a clean Aubry indicator.
  R.lambda_step = min_cycle_mean(R.base.h);
  R.base_normalized = R.base.h;
  for (double& v : R.base_normalized.data) v -= R.lambda_step;

  // Geometric schedule: accumulate the elementwise min of powers B^(2^j).
  Matrix power = R.base_normalized;
  Matrix acc = R.base_normalized;
  R.times.push_back(t_base);
  double t = t_base;
  R.schedule_converged = false;
  while (t * 2 <= opts.t_max * (1 + 1e-12)) {
    power = min_plus(power, power);
    t *= 2;
    Matrix next = elementwise_min(acc, power);
    R.schedule_last_change = sup_diff(next, acc);
    acc = std::move(next);
    R.times.push_back(t);
    if (R.schedule_last_change < opts.schedule_stop) {
      R.schedule_converged = true;
      break;
    }
  }

  // Close under composition: the fixed point is the min over every path
  // length, so the triangle inequality holds exactly and the flat model's
  // barrier collapses to zero.
  for (int pass = 0; pass < opts.max_closure_passes; ++pass) {
    Matrix next = elementwise_min(acc, min_plus(acc, acc));
    R.closure_last_change = sup_diff(next, acc);
    acc = std::move(next);
    ++R.closure_passes;
    if (R.closure_last_change < opts.closure_stop) break;
  }

  R.h = std::move(acc);
  return R;
}

CriticalValue mane_critical_value(const LagrangianModel& m, const PeierlsResult& peierls,
                                  double tol) {
  CriticalValue cv;
  cv.value = m.critical_value();
  cv.eigen_estimate = -peierls.lambda_step / peierls.t_base;

  const std::size_t star = resting_node(m, peierls.grid);
  Matrix power = peierls.base.h;  // raw actions, no normalization
  double t = peierls.t_base;
  int out = 0;
  const double horizons[3] = {8.0, 16.0, 32.0};
  while (out < 3) {
    if (std::abs(t - horizons[out]) < 1e-9) {
      cv.diagonal_estimates[std::size_t(out)] = -power(star, star) / t;
      ++out;
    }
    if (out == 3) break;
    power = min_plus(power, power);
    t *= 2;
    if (t > 64.0) break;
  }
  if (out != 3)
    throw SolverError("mane_critical_value: base horizon does not divide the check horizons");

  cv.max_discrepancy = std::abs(cv.eigen_estimate - cv.value);
  for (double est : cv.diagonal_estimates)
    cv.max_discrepancy = std::max(cv.max_discrepancy, std::abs(est - cv.value));
  if (cv.max_discrepancy > tol) {
    std::ostringstream msg;
    msg << "mane_critical_value: estimates disagree (closed form " << cv.value
        << ", eigenvalue " << cv.eigen_estimate << ", diagonals " << cv.diagonal_estimates[0]
        << ", " << cv.diagonal_estimates[1] << ", " << cv.diagonal_estimates[2] << ")";
    throw SolverError(msg.str());
  }
  return cv;
}

StaticClassPartition aubry_and_static_classes(const PeierlsResult& peierls, double delta) {
  StaticClassPartition P;
  P.delta = delta > 0 ? delta : 1e-4;
  // Grid relay floor: hopping one cell over the base horizon costs
  // spacing^2 / (2 t_base) each way, so within a continuum of static points
  // the pseudo-distance of neighbors sits at twice that, not at zero.
  P.delta_class = std::max(P.delta, 2.0 * sq(peierls.grid.spacing()) / peierls.t_base);
  P.d = peierls.pseudo_distance();
  const std::size_t n = peierls.h.rows;
  for (std::size_t i = 0; i < n; ++i)
    if (peierls.h(i, i) <= P.delta) P.aubry.push_back(i);
  if (P.aubry.empty())
    throw SolverError("aubry_and_static_classes: empty Aubry set (compactness guarantees one)");

  // Union-find over the pseudo-distance relation restricted to the Aubry set.
  std::vector<std::size_t> parent(P.aubry.size());
  std::iota(parent.begin(), parent.end(), std::size_t(0));
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < P.aubry.size(); ++a)
    for (std::size_t b = a + 1; b < P.aubry.size(); ++b)
      if (P.d(P.aubry[a], P.aubry[b]) <= P.delta_class) parent[find(a)] = find(b);

  std::vector<std::vector<std::size_t>> by_root(P.aubry.size());
  for (std::size_t a = 0; a < P.aubry.size(); ++a) by_root[find(a)].push_back(P.aubry[a]);
  for (auto& c : by_root)
    if (!c.empty()) P.classes.push_back(std::move(c));
  return P;
}

WeakKamPair weak_kam_pair(const LagrangianModel& m, const PeierlsResult& peierls,
                          double t_step, const WeakKamOptions& opts) {
  WeakKamPair pair;
  const TorusGrid& grid = peierls.grid;
  const std::size_t n = grid.size();
  pair.ref_node = resting_node(m, grid);

  Matrix B;  // normalized step table
  if (t_step <= 0 || std::abs(t_step - peierls.t_base) < 1e-12) {
    pair.t_step = peierls.t_base;
    pair.lambda_step = peierls.lambda_step;
    B = peierls.base_normalized;
  } else {
    FundamentalTable raw = build_fundamental_table(m, grid, 0.0, t_step, TableOptions{});
    pair.t_step = t_step;
    pair.lambda_step = min_cycle_mean(raw.h);
    B = raw.h;
    for (double& v : B.data) v -= pair.lambda_step;
  }

  // Backward evolution from zero, pinned at the resting node each step.
  std::vector<double> u(n, 0.0), next(n, 0.0);
  for (pair.iters_minus = 1; pair.iters_minus <= opts.max_iters; ++pair.iters_minus) {
    for (std::size_t y = 0; y < n; ++y) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < n; ++x) best = std::min(best, u[x] + B(x, y));
      next[y] = best;
    }
    const double shift = next[pair.ref_node];
    for (double& v : next) v -= shift;
    pair.residual_minus = 0.0;
    for (std::size_t y = 0; y < n; ++y)
      pair.residual_minus = std::max(pair.residual_minus, std::abs(next[y] - u[y]));
    u.swap(next);
    if (pair.residual_minus < opts.sup_tol) break;
  }
  if (pair.residual_minus >= opts.sup_tol)
    throw SolverError("weak_kam_pair: backward iteration did not settle");

  // Forward evolution applied to u_minus converges to the conjugate solution.
  std::vector<double> w = u, wn(n, 0.0);
  for (pair.iters_plus = 1; pair.iters_plus <= opts.max_iters; ++pair.iters_plus) {
    for (std::size_t x = 0; x < n; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t y = 0; y < n; ++y) best = std::max(best, w[y] - B(x, y));
      wn[x] = best;
    }
    pair.residual_plus = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      pair.residual_plus = std::max(pair.residual_plus, std::abs(wn[x] - w[x]));
    w.swap(wn);
    if (pair.residual_plus < opts.sup_tol) break;
  }
  if (pair.residual_plus >= opts.sup_tol)
    throw SolverError("weak_kam_pair: forward iteration did not settle");

  // Round trip: conjugating twice must restore the backward solution.
  std::vector<double> up(n), back(n);
  for (std::size_t x = 0; x < n; ++x) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < n; ++y) best = std::max(best, u[y] - B(x, y));
    up[x] = best;
  }
  for (std::size_t y = 0; y < n; ++y) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n; ++x) best = std::min(best, up[x] + B(x, y));
    back[y] = best;
  }
  pair.compose_defect = 0.0;
  for (std::size_t y = 0; y < n; ++y)
    pair.compose_defect = std::max(pair.compose_defect, std::abs(back[y] - u[y]));
  if (pair.compose_defect > opts.compose_check_tol)
    throw SolverError("weak_kam_pair: conjugation round trip defect " +
                      std::to_string(pair.compose_defect));

  pair.u_minus = Potential(std::move(u));
  pair.u_plus = Potential(std::move(w));
  return pair;
}

StaticInclusionReport static_class_in_superdiff(const StaticClassPartition& partition,
                                                const Matrix& peierls_h,
                                                const WeakKamPair& pair, std::size_t y,
                                                double tol) {
  StaticInclusionReport rep;
  rep.tol = tol > 0 ? tol
                    : std::max(1e-3, 10.0 * std::max({pair.residual_minus, pair.residual_plus,
                                                      pair.compose_defect}));
  double best_slack = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < partition.classes.size(); ++c) {
    double slack = 0.0;
    for (std::size_t x : partition.classes[c])
      slack = std::max(slack, std::abs(pair.u_plus[x] + peierls_h(x, y) - pair.u_minus[y]));
    if (slack < best_slack) {
      best_slack = slack;
      rep.class_index = c;
      rep.worst_slack = slack;
    }
  }
  rep.included = best_slack <= rep.tol;
  return rep;
}

}  // namespace wkot
