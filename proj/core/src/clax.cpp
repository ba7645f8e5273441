#include "wkot/clax.hpp"

#include "wkot/clax_core.hpp"

#include <algorithm>

namespace wkot {

double arg_tolerance(const CostTable& c) { return 1e-9 * (1.0 + max_abs(c.values)); }

Potential t_minus(const Potential& phi, const CostTable& c) {
  return Potential(claxcore::t_minus(phi.values, c.values));
}

Potential t_plus(const Potential& psi, const CostTable& c) {
  return Potential(claxcore::t_plus(psi.values, c.values));
}

bool CSubdiffSet::contains(std::size_t i) const {
  return std::binary_search(members.begin(), members.end(), i);
}

CSubdiffSet c_subdiff(const Potential& phi, const CostTable& c, std::size_t x, double eps) {
  if (eps < 0) eps = arg_tolerance(c);
  return CSubdiffSet{x, claxcore::subdiff_set(phi.values, c.values, x, eps), eps};
}

CSubdiffSet c_superdiff(const Potential& psi, const CostTable& c, std::size_t y, double eps) {
  if (eps < 0) eps = arg_tolerance(c);
  return CSubdiffSet{y, claxcore::superdiff_set(psi.values, c.values, y, eps), eps};
}

Potential commutator_defect(const Potential& psi, const CostTable& c) {
  return Potential(claxcore::commutator_defect(psi.values, c.values));
}

CConcavity is_c_concave(const Potential& psi, const CostTable& c, double eps) {
  if (eps < 0) eps = arg_tolerance(c);
  CConcavity r;
  Potential defect = commutator_defect(psi, c);
  r.max_defect = max_abs(defect.values);
  r.witness_phi = t_plus(psi, c);
  r.c_concave = r.max_defect <= eps;
  auto sets = claxcore::superdiff_sets(psi.values, c.values, eps);
  r.superdiff_nonempty_everywhere =
      std::all_of(sets.begin(), sets.end(), [](const auto& s) { return !s.empty(); });
  return r;
}

CSingularReport sing_c(const Potential& psi, const CostTable& c,
                       const TorusGrid* y_grid, const TorusGrid* x_grid, double eps,
                       double span_gate) {
  if (eps < 0) eps = arg_tolerance(c);
  CConcavity conc = is_c_concave(psi, c, eps);
  if (!conc.c_concave)
    throw DomainError("sing_c: input potential is not c-concave (max defect " +
                      num17(conc.max_defect) + ")");
  if (y_grid && y_grid->size() != c.cols())
    throw DomainError("sing_c: y_grid size must match cost columns");
  if (x_grid && x_grid->size() != c.rows())
    throw DomainError("sing_c: x_grid size must match cost rows");

  CSingularReport rep;
  rep.superdiff = claxcore::superdiff_sets(psi.values, c.values, eps);
  rep.cardinality.resize(rep.superdiff.size());
  for (std::size_t y = 0; y < rep.superdiff.size(); ++y) {
    rep.cardinality[y] = rep.superdiff[y].size();
    if (x_grid) {
      // On a grid, near-ties around a single continuum argmax are a
      // discretization artifact whose width is set by eps and the section
      // curvature; only members spread beyond the gate signal genuine
      // multiplicity.
      const double gate = span_gate > 0 ? span_gate : 1.5 * x_grid->spacing();
      double span = 0.0;
      const auto& s = rep.superdiff[y];
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
          span = std::max(span, x_grid->distance(s[a], s[b]));
      if (span > gate) rep.singular.push_back(y);
    } else if (rep.cardinality[y] >= 2) {
      rep.singular.push_back(y);
    }
  }

  rep.reachable.resize(rep.superdiff.size());
  if (!y_grid) {
    rep.reachable = rep.superdiff;
    rep.reachable_fallback = true;
    return rep;
  }
  const double cell = x_grid ? 1.5 * x_grid->spacing() : 0.0;
  for (std::size_t y = 0; y < rep.superdiff.size(); ++y) {
    std::vector<std::size_t> candidates;
    for (std::size_t nb : y_grid->neighbors(y))
      if (rep.superdiff[nb].size() == 1) candidates.push_back(rep.superdiff[nb][0]);
    for (std::size_t x : rep.superdiff[y]) {
      bool hit = false;
      for (std::size_t cand : candidates) {
        if (cand == x || (x_grid && x_grid->distance(cand, x) <= cell)) {
          hit = true;
          break;
        }
      }
      if (hit) rep.reachable[y].push_back(x);
    }
    // A point with a singleton superdifferential is its own limit.
    if (rep.reachable[y].empty() && rep.superdiff[y].size() == 1)
      rep.reachable[y] = rep.superdiff[y];
  }
  return rep;
}

}  // namespace wkot
