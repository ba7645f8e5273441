#include "wkot/kantorovich.hpp"

#include "wkot/mincost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wkot {

namespace {

constexpr double kScale = 1e12;

MatrixT<long long> integerize_costs(const Matrix& c) {
  MatrixT<long long> out(c.rows, c.cols);
  for (std::size_t i = 0; i < c.data.size(); ++i) {
    const double scaled = c.data[i] * kScale;
    if (std::abs(scaled) > 9e17)
      throw DomainError("solve_kantorovich: cost magnitude too large for exact scaling");
    out.data[i] = std::llround(scaled);
  }
  return out;
}

}  // namespace

KantorovichResult solve_kantorovich(const ProbMeasure& mu, const ProbMeasure& nu,
                                    const CostTable& c) {
  const std::size_t nr = c.rows(), nc = c.cols();
  if (mu.size() != nr || nu.size() != nc)
    throw DomainError("solve_kantorovich: marginal sizes do not match the cost");

  const MatrixT<long long> ic = integerize_costs(c.values);
  const auto supply = largest_remainder_scale(mu.weights, (long long)(kScale));
  const auto demand = largest_remainder_scale(nu.weights, (long long)(kScale));
  FlowSolution flow = solve_transport(ic, supply, demand);

  KantorovichResult res;
  Matrix plan_m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) plan_m(i, j) = double(flow.flow(i, j)) / kScale;
  res.plan = TransportPlan(std::move(plan_m));
  res.value = 0.0;
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) res.value += res.plan(i, j) * c.values(i, j);

  // Flow potentials are feasible for psi(y) - phi(x) <= c(x,y); project onto
  // the conjugate cone, which can only tighten the dual objective.
  std::vector<double> phi0(nr);
  for (std::size_t i = 0; i < nr; ++i) phi0[i] = double(flow.pot_row[i]) / kScale;
  Potential phi_raw(std::move(phi0));
  res.psi = t_minus(phi_raw, c);
  res.phi = t_plus(res.psi, c);

  double dual = 0.0;
  for (std::size_t j = 0; j < nc; ++j) dual += res.psi[j] * nu.weights[j];
  for (std::size_t i = 0; i < nr; ++i) dual -= res.phi[i] * mu.weights[i];
  res.gap = res.value - dual;

  res.max_ic_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      res.max_ic_violation = std::max(res.max_ic_violation,
                                      res.psi[j] - res.phi[i] - c.values(i, j));
  const double tol = 1e-9 * (1.0 + max_abs(c.values));
  res.certified = std::abs(res.gap) <= tol && res.max_ic_violation <= tol &&
                  flow.max_reduced_cost_violation(ic) == 0;
  return res;
}

SlackTable slack_table(const Potential& phi, const CostTable& c) {
  SlackTable out;
  Potential tphi = t_minus(phi, c);
  out.F = Matrix(c.rows(), c.cols());
  out.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) {
      out.F(i, j) = phi[i] + c.values(i, j) - tphi[j];
      out.min_value = std::min(out.min_value, out.F(i, j));
    }
  return out;
}

KMinusCert solve_K_minus(const ProbMeasure& mu, const ProbMeasure& nu, const CostTable& c,
                         double tol) {
  KMinusCert cert;
  cert.transport = solve_kantorovich(mu, nu, c);
  cert.phi = cert.transport.phi;
  Potential tphi = t_minus(cert.phi, c);
  cert.evolved_side = integrate(tphi, nu);
  cert.plan_side = integrate(cert.phi, mu) + cert.transport.value;
  cert.gap = cert.evolved_side - cert.plan_side;
  cert.certified = cert.transport.certified && std::abs(cert.gap) <= tol;
  if (!cert.certified && cert.transport.certified)
    throw SolverError("solve_K_minus: certified dual failed the one-potential identity (gap " +
                      num17(cert.gap) + ")");
  return cert;
}

KPlusCert solve_K_plus(const ProbMeasure& mu, const ProbMeasure& nu, const CostTable& c,
                       double tol) {
  KPlusCert cert;
  cert.transport = solve_kantorovich(mu, nu, c);
  cert.psi = cert.transport.psi;
  Potential tpsi = t_plus(cert.psi, c);
  cert.evolved_side = integrate(tpsi, mu);
  cert.plan_side = integrate(cert.psi, nu) - cert.transport.value;
  cert.gap = cert.evolved_side - cert.plan_side;
  cert.certified = cert.transport.certified && std::abs(cert.gap) <= tol;
  if (!cert.certified && cert.transport.certified)
    throw SolverError("solve_K_plus: certified dual failed the one-potential identity (gap " +
                      num17(cert.gap) + ")");
  return cert;
}

SupportCheck support_characterization(const Potential& phi, const TransportPlan& plan,
                                      const CostTable& c, double eps) {
  if (eps < 0) eps = arg_tolerance(c);
  SupportCheck check;
  check.slack = slack_table(phi, c);
  check.max_slack_on_support = 0.0;
  for (const auto& [i, j] : plan.support())
    check.max_slack_on_support = std::max(check.max_slack_on_support, check.slack.F(i, j));
  check.ok = check.max_slack_on_support <= eps;
  return check;
}

DiracCondition dirac_support_condition(const Potential& phi, const ProbMeasure& mu,
                                       std::size_t y0, const CostTable& c, double eps) {
  if (y0 >= c.cols()) throw DomainError("dirac_support_condition: target index out of range");
  DiracCondition cond;
  cond.eps = eps < 0 ? arg_tolerance(c) : eps;
  Potential tphi = t_minus(phi, c);
  cond.worst_slack = 0.0;
  for (std::size_t x : mu.support())
    cond.worst_slack =
        std::max(cond.worst_slack, phi[x] + c.values(x, y0) - tphi[y0]);
  cond.ok = cond.worst_slack <= cond.eps;
  return cond;
}

MongeReport monge_check(const std::vector<long>& T, const ProbMeasure& mu,
                        const ProbMeasure& nu, const CostTable& c, const Potential* phi,
                        double tol) {
  if (T.size() != mu.size()) throw DomainError("monge_check: map size does not match mu");
  ProbMeasure pushed = pushforward(T, mu, nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j)
    if (std::abs(pushed.weights[j] - nu.weights[j]) > 1e-12)
      throw DomainError("monge_check: map does not push mu onto nu");

  MongeReport rep;
  rep.pushforward_ok = true;

  KantorovichResult lp = solve_kantorovich(mu, nu, c);
  rep.lp_value = lp.value;
  rep.phi = phi ? *phi : lp.phi;

  rep.map_value = 0.0;
  for (std::size_t i : mu.support())
    rep.map_value += mu.weights[i] * c.values(i, std::size_t(T[i]));
  rep.plan_optimal = rep.map_value <= rep.lp_value + tol;

  Potential tphi = t_minus(rep.phi, c);
  double lhs = 0.0, rhs = 0.0;
  bool member = true;
  const double eps = arg_tolerance(c);
  for (std::size_t i : mu.support()) {
    const std::size_t j = std::size_t(T[i]);
    lhs += mu.weights[i] * tphi[j];
    rhs += mu.weights[i] * (rep.phi[i] + c.values(i, j));
    if (rep.phi[i] + c.values(i, j) - tphi[j] > eps) member = false;
  }
  rep.value_identity = std::abs(lhs - rhs) <= tol;
  rep.subdiff_membership = member;
  return rep;
}

}  // namespace wkot
