#include "wkot/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wkot {

namespace {

// Direct shooting table over one horizon no longer than the model's safe
// shooting range.  Rows are independent two-point problems, solved in
// parallel.
FundamentalTable shoot_table(const LagrangianModel& m, const TorusGrid& grid, double t1,
                             double t2, const TableOptions& opts) {
  if (grid.dim != 1)
    throw DomainError("fundamental tables are computed for 1-d torus grids");
  const std::size_t n = grid.size();
  FundamentalTable tab;
  tab.t1 = t1;
  tab.t2 = t2;
  tab.grid = grid;
  tab.dt = opts.dt;
  tab.h = Matrix(n, n);
  tab.has_velocities = opts.keep_velocities;
  if (opts.keep_velocities) tab.v0 = Matrix(n, n);

  const double tau = t2 - t1;
  std::vector<double> targets(n);
  for (std::size_t j = 0; j < n; ++j) targets[j] = grid.point(j)[0];

  ShootOptions sopt = opts.shoot;
  sopt.dt = opts.dt;

  std::vector<char> boundary_flags(n, 0);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      auto row = shoot_row(m, tau, grid.point(i)[0], targets, sopt, false);
      for (std::size_t j = 0; j < n; ++j) {
        tab.h(i, j) = row[j].value;
        if (opts.keep_velocities) tab.v0(i, j) = row[j].v0;
        if (row[j].boundary) boundary_flags[i] = 1;
      }
    }
  });
  tab.any_boundary =
      std::any_of(boundary_flags.begin(), boundary_flags.end(), [](char f) { return f != 0; });
  return tab;
}

}  // namespace

FundamentalTable build_fundamental_table(const LagrangianModel& m, const TorusGrid& grid,
                                         double t1, double t2, const TableOptions& opts) {
  if (!(t2 > t1)) throw DomainError("build_fundamental_table: requires t2 > t1");
  const double tau = t2 - t1;
  double horizon = opts.max_shoot_horizon > 0 ? opts.max_shoot_horizon : m.shoot_horizon();

  // Number of equal pieces (a power of two) so each piece fits the horizon.
  int pieces = 1;
  while (tau / pieces > horizon * (1 + 1e-12)) pieces *= 2;

  if (pieces == 1) return shoot_table(m, grid, t1, t2, opts);

  // The model is autonomous: every piece shares one table. Compose by
  // repeated min-plus squaring.
  const double piece = tau / pieces;
  FundamentalTable base = shoot_table(m, grid, 0.0, piece, opts);
  Matrix acc = base.h;
  for (int doublings = 0; (1 << doublings) < pieces; ++doublings) acc = min_plus(acc, acc);

  FundamentalTable tab;
  tab.t1 = t1;
  tab.t2 = t2;
  tab.grid = grid;
  tab.dt = opts.dt;
  tab.h = std::move(acc);
  tab.has_velocities = false;  // velocities are only meaningful for direct shots
  tab.any_boundary = base.any_boundary;
  return tab;
}

FundamentalTable build_fundamental_table_2d(const LagrangianModel& m, const TorusGrid& grid,
                                            double t1, double t2, const TableOptions& opts) {
  if (grid.dim != 2) throw DomainError("build_fundamental_table_2d: grid must be 2-d");
  // Per-axis factors: the constant shift rides along with the first axis.
  LagrangianModel mx = m, my = m;
  mx.dim = 1;
  my.dim = 1;
  my.shift = 0.0;
  const TorusGrid line(1, grid.n);
  FundamentalTable hx = build_fundamental_table(mx, line, t1, t2, opts);
  FundamentalTable hy = build_fundamental_table(my, line, t1, t2, opts);

  const std::size_t n2 = grid.size();
  FundamentalTable tab;
  tab.t1 = t1;
  tab.t2 = t2;
  tab.grid = grid;
  tab.dt = opts.dt;
  tab.h = Matrix(n2, n2);
  tab.any_boundary = hx.any_boundary || hy.any_boundary;
  for (std::size_t a = 0; a < n2; ++a) {
    const auto ij = grid.axes(a);
    for (std::size_t b = 0; b < n2; ++b) {
      const auto kl = grid.axes(b);
      tab.h(a, b) = hx.h(std::size_t(ij[0]), std::size_t(kl[0])) +
                    hy.h(std::size_t(ij[1]), std::size_t(kl[1]));
    }
  }
  return tab;
}

Potential evolve(const FundamentalTable& table, const Potential& phi, Evolution kind) {
  const std::size_t n = table.grid.size();
  if (phi.size() != n) throw DomainError("evolve: potential size does not match the grid");
  Potential out(std::vector<double>(n, 0.0));
  if (kind == Evolution::min_plus) {
    for (std::size_t y = 0; y < n; ++y) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < n; ++x) best = std::min(best, phi[x] + table.h(x, y));
      out[y] = best;
    }
  } else {
    for (std::size_t x = 0; x < n; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t y = 0; y < n; ++y) best = std::max(best, phi[y] - table.h(x, y));
      out[x] = best;
    }
  }
  return out;
}

double markov_defect(const FundamentalTable& whole, const FundamentalTable& first,
                     const FundamentalTable& second) {
  if (whole.grid.size() != first.grid.size() || whole.grid.size() != second.grid.size())
    throw DomainError("markov_defect: grids differ");
  if (std::abs((first.tau() + second.tau()) - whole.tau()) > 1e-9)
    throw DomainError("markov_defect: horizons do not chain");
  Matrix composed = min_plus(first.h, second.h);
  double worst = 0.0;
  for (std::size_t i = 0; i < composed.data.size(); ++i)
    worst = std::max(worst, std::abs(composed.data[i] - whole.h.data[i]));
  return worst;
}

Matrix free_model_table(const TorusGrid& grid, double tau) {
  const std::size_t n = grid.size();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = grid.distance(i, j);
      h(i, j) = d * d / (2.0 * tau);
    }
  return h;
}

}  // namespace wkot
