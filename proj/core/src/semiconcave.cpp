#include "wkot/semiconcave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wkot {

namespace {

double dist2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return sq(a[0] - b[0]) + sq(a[1] - b[1]);
}

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

void dedup(std::vector<std::array<double, 2>>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) { return dist2(a, b) < 1e-24; }),
            pts.end());
}

double max_diameter(const std::vector<std::array<double, 2>>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, std::sqrt(dist2(pts[i], pts[j])));
  return best;
}

}  // namespace

std::vector<std::array<double, 2>> planar_hull(std::vector<std::array<double, 2>> pts) {
  dedup(pts);
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  // Monotone chain; points arrive lexicographically sorted from dedup.
  std::vector<std::array<double, 2>> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-10) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-10) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

SuperdiffEstimate superdifferential(const Potential& phi, const TorusGrid& grid,
                                    std::size_t idx) {
  if (phi.size() != grid.size())
    throw DomainError("superdifferential: potential size does not match the grid");
  SuperdiffEstimate est;
  est.index = idx;
  est.dim = grid.dim;
  const double dx = grid.spacing();
  const auto ij = grid.axes(idx);

  auto at = [&](long i, long j) { return phi[grid.flatten(i, j)]; };
  const double fx = (at(ij[0] + 1, ij[1]) - at(ij[0], ij[1])) / dx;  // forward
  const double bx = (at(ij[0], ij[1]) - at(ij[0] - 1, ij[1])) / dx;  // backward

  if (grid.dim == 1) {
    // The one-sided derivatives bracket the superdifferential: for a
    // semiconcave function the interval [forward, backward] is the full D+.
    est.d_star = {{fx, 0.0}, {bx, 0.0}};
    dedup(est.d_star);
    est.hull = {{std::min(fx, bx), 0.0}, {std::max(fx, bx), 0.0}};
    est.diameter = std::abs(fx - bx);
    return est;
  }

  const double fy = (at(ij[0], ij[1] + 1) - at(ij[0], ij[1])) / dx;
  const double by = (at(ij[0], ij[1]) - at(ij[0], ij[1] - 1)) / dx;
  est.d_star = {{fx, fy}, {fx, by}, {bx, fy}, {bx, by}};
  dedup(est.d_star);
  est.hull = planar_hull(est.d_star);
  est.diameter = max_diameter(est.d_star);
  return est;
}

SemiconcavityReport semiconcavity_check(const Potential& phi, const TorusGrid& grid, double C,
                                        double max_lag, double tol) {
  if (phi.size() != grid.size())
    throw DomainError("semiconcavity_check: potential size does not match the grid");
  SemiconcavityReport rep;
  rep.constant = C;
  if (tol < 0) tol = 1e-9 * (1.0 + max_abs(phi.values));
  const double dx = grid.spacing();
  const int kmax = std::max(1, int(std::floor(max_lag / dx)));

  // Offsets: axis lags in 1-d; axis plus diagonal lags in 2-d.
  std::vector<std::array<int, 2>> offsets;
  for (int k = 1; k <= kmax; ++k) {
    offsets.push_back({k, 0});
    if (grid.dim == 2) {
      offsets.push_back({0, k});
      if (std::hypot(double(k), double(k)) * dx <= max_lag) {
        offsets.push_back({k, k});
        offsets.push_back({k, -k});
      }
    }
  }

  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto ij = grid.axes(idx);
    for (const auto& off : offsets) {
      const double h2 = (sq(double(off[0])) + sq(double(off[1]))) * dx * dx;
      const double second = phi[grid.flatten(ij[0] + off[0], ij[1] + off[1])] +
                            phi[grid.flatten(ij[0] - off[0], ij[1] - off[1])] -
                            2.0 * phi[idx];
      const double excess = second - C * h2;
      if (excess > rep.worst_excess) {
        rep.worst_excess = excess;
        rep.worst_index = idx;
      }
    }
  }
  rep.ok = rep.worst_excess <= tol;
  return rep;
}

double estimate_semiconcavity(const Potential& phi, const TorusGrid& grid) {
  const double dx = grid.spacing();
  double c = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto ij = grid.axes(idx);
    const double sx = phi[grid.flatten(ij[0] + 1, ij[1])] + phi[grid.flatten(ij[0] - 1, ij[1])] -
                      2.0 * phi[idx];
    c = std::max(c, sx / (dx * dx));
    if (grid.dim == 2) {
      const double sy = phi[grid.flatten(ij[0], ij[1] + 1)] +
                        phi[grid.flatten(ij[0], ij[1] - 1)] - 2.0 * phi[idx];
      c = std::max(c, sy / (dx * dx));
    }
  }
  return c;
}

SingSet sing_set(const Potential& phi, const TorusGrid& grid, double C, double theta) {
  SingSet out;
  // Concave kinks produce negative second differences, so the positive-part
  // estimate reflects the smooth curvature only; 5% headroom covers the gap
  // between lag-1 quotients and the true maximal curvature.
  out.constant = C >= 0 ? C : 1.05 * estimate_semiconcavity(phi, grid) + 1e-12;
  auto check = semiconcavity_check(phi, grid, out.constant);
  if (!check.ok)
    throw DomainError("sing_set: input is not semiconcave with constant " +
                      std::to_string(out.constant) + " (excess " +
                      std::to_string(check.worst_excess) + ")");
  out.theta = theta >= 0 ? theta : 10.0 * grid.spacing() * (1.0 + out.constant);
  out.estimates.reserve(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    out.estimates.push_back(superdifferential(phi, grid, idx));
    if (out.estimates.back().singular(out.theta)) out.members.push_back(idx);
  }
  return out;
}

MarginalSuperdiff marginal_superdiff(const std::vector<Potential>& F, const TorusGrid& grid,
                                     std::size_t idx, double eps) {
  if (F.empty()) throw DomainError("marginal_superdiff: empty family");
  for (const auto& f : F)
    if (f.size() != grid.size())
      throw DomainError("marginal_superdiff: family member size does not match the grid");
  if (eps < 0) {
    double scale = 0.0;
    for (const auto& f : F) scale = std::max(scale, max_abs(f.values));
    eps = 1e-9 * (1.0 + scale);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : F) best = std::min(best, f[idx]);

  MarginalSuperdiff out;
  out.estimate.index = idx;
  out.estimate.dim = grid.dim;
  const double dx = grid.spacing();
  const auto ij = grid.axes(idx);
  for (std::size_t s = 0; s < F.size(); ++s) {
    if (F[s][idx] > best + eps) continue;
    out.active.push_back(s);
    // Active members are assumed smooth at the node: central differences.
    const double gx = (F[s][grid.flatten(ij[0] + 1, ij[1])] -
                       F[s][grid.flatten(ij[0] - 1, ij[1])]) /
                      (2.0 * dx);
    double gy = 0.0;
    if (grid.dim == 2)
      gy = (F[s][grid.flatten(ij[0], ij[1] + 1)] - F[s][grid.flatten(ij[0], ij[1] - 1)]) /
           (2.0 * dx);
    out.estimate.d_star.push_back({gx, gy});
  }
  dedup(out.estimate.d_star);
  if (grid.dim == 1) {
    double lo = out.estimate.d_star.front()[0], hi = lo;
    for (const auto& p : out.estimate.d_star) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    out.estimate.hull = {{lo, 0.0}, {hi, 0.0}};
    out.estimate.diameter = hi - lo;
  } else {
    out.estimate.hull = planar_hull(out.estimate.d_star);
    out.estimate.diameter = max_diameter(out.estimate.d_star);
  }
  return out;
}

}  // namespace wkot
