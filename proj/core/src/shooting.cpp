#include "wkot/shooting.hpp"

#include "wkot/space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

namespace wkot {

namespace {

struct Sample {
  double v, e, a;   // initial velocity, unwrapped endpoint, action
};

struct Scanner {
  const LagrangianModel& m;
  double x, tau, dt;
  double max_jump;
  std::vector<Sample> samples;   // sorted by v

  Sample eval(double v) const {
    RawEndpoint r = integrate_unwrapped(m, x, v, tau, dt);
    return Sample{v, r.x, r.action};
  }

  // Keeps the covered velocity range contiguous: extensions bridge any gap so
  // consecutive samples always delimit a genuinely sampled interval.
  void cover(double lo, double hi, double density) {
    if (!(lo < hi)) return;
    if (samples.empty()) {
      scan_segment(lo, hi, density);
      return;
    }
    const double have_lo = samples.front().v, have_hi = samples.back().v;
    if (lo < have_lo) scan_segment(lo, have_lo, density);
    if (hi > have_hi) scan_segment(have_hi, hi, density);
  }

  // Uniform scan of [lo, hi] plus adaptive subdivision wherever the endpoint
  // moves more than max_jump between neighbors (aliasing guard near
  // separatrices).
  void scan_segment(double lo, double hi, double density) {
    const int n = std::max(8, int(std::ceil((hi - lo) * density)));
    std::vector<Sample> fresh;
    fresh.reserve(n + 1);
    for (int i = 0; i <= n; ++i) fresh.push_back(eval(lo + (hi - lo) * i / double(n)));
    std::deque<std::pair<Sample, Sample>> work;
    std::vector<Sample> extra;
    for (int i = 0; i + 1 <= n; ++i) work.emplace_back(fresh[i], fresh[i + 1]);
    while (!work.empty()) {
      auto [a, b] = work.front();
      work.pop_front();
      if (std::abs(b.e - a.e) <= max_jump || (b.v - a.v) <= 1e-10) continue;
      Sample mid = eval(0.5 * (a.v + b.v));
      extra.push_back(mid);
      work.emplace_back(a, mid);
      work.emplace_back(mid, b);
    }
    fresh.insert(fresh.end(), extra.begin(), extra.end());
    samples.insert(samples.end(), fresh.begin(), fresh.end());
    std::sort(samples.begin(), samples.end(),
              [](const Sample& p, const Sample& q) { return p.v < q.v; });
  }
};

struct Candidate {
  std::size_t target;
  int winding;
  double v_lo, v_hi;
  double lower_est;   // safe lower bound on the achievable action in the bracket
};

}  // namespace

std::vector<ShootSolution> shoot_row(const LagrangianModel& m, double tau, double x,
                                     const std::vector<double>& targets,
                                     const ShootOptions& opts, bool want_orbits) {
  if (tau <= 0) throw DomainError("shoot_row: tau must be positive");
  if (m.dim != 1) throw DomainError("shoot_row: dynamics implemented for dim 1");
  const int K = opts.k_wind;
  const double osc = std::max(0.0, m.osc_V());
  const double max_grad =
      m.kind == PotentialKind::zero ? 0.0 : 2.0 * std::numbers::pi * std::abs(m.amplitude);
  // Radius around the mean velocity guaranteed to bracket every root: energy
  // oscillation bounds the spread of v along an orbit, the force term bounds
  // how far the endpoint can sit from the straight line.
  const double R = 2.0 + 2.0 * std::sqrt(2.0 * osc) + 0.5 * max_grad * tau * tau;

  double spu = opts.samples_per_unit_v;
  if (spu <= 0) {
    const double w = std::sqrt(m.curvature_bound());
    spu = std::clamp(2.0 * std::exp(w * tau), 160.0, 20000.0);
  }

  Scanner scan{m, x, tau, opts.dt, opts.max_endpoint_jump, {}};

  const double max_v = m.max_V();
  std::vector<ShootSolution> out(targets.size());
  std::vector<double> disp0(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) disp0[j] = signed_diff(targets[j], x);

  // Mandatory window: base lift and its two neighbors for every target.
  {
    double lo = 1e300, hi = -1e300;
    for (double d : disp0) {
      lo = std::min(lo, (d - 1.0) / tau - R);
      hi = std::max(hi, (d + 1.0) / tau + R);
    }
    scan.cover(lo, hi, spu);
  }

  auto bisect = [&](std::size_t j, double target_e, int k, double v_lo, double v_hi,
                    double g_lo) {
    double a = v_lo, b = v_hi, ga = g_lo;
    Sample last{};
    bool have_last = false;
    for (int it = 0; it < opts.bisect_iters; ++it) {
      if ((b - a) <= opts.bracket_width_floor * std::max(1.0, std::abs(a))) break;
      const double mid = 0.5 * (a + b);
      last = scan.eval(mid);
      have_last = true;
      const double gm = last.e - target_e;
      if ((ga < 0) == (gm < 0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    if (!have_last) last = scan.eval(0.5 * (a + b));
    ShootSolution& best = out[j];
    if (!best.found || last.a < best.value) {
      best.found = true;
      best.value = last.a;
      best.v0 = last.v;
      best.winding = k;
      best.boundary = std::abs(k) == K;
    }
  };

  for (std::size_t j = 0; j < targets.size(); ++j) {
    // Lifts ordered by displacement magnitude: best chance to establish a good
    // incumbent early so the action lower bound prunes far lifts.
    std::vector<int> lifts;
    for (int k = -K; k <= K; ++k) lifts.push_back(k);
    std::sort(lifts.begin(), lifts.end(), [&](int p, int q) {
      return std::abs(disp0[j] + p) < std::abs(disp0[j] + q);
    });
    for (int k : lifts) {
      const double D = disp0[j] + k;
      const double lb = D * D / (2.0 * tau) - max_v * tau;
      if (out[j].found && lb >= out[j].value - 1e-12) continue;
      const double vc = D / tau;
      scan.cover(vc - R, vc + R, spu);
      const double target_e = x + D;
      // Walk the samples inside the window, gather brackets with a safe lower
      // bound on the root's action: |dA/d endpoint| = |terminal momentum|.
      std::vector<Candidate> cands;
      const auto& S = scan.samples;
      auto it_lo = std::lower_bound(S.begin(), S.end(), vc - R,
                                    [](const Sample& s, double v) { return s.v < v; });
      for (auto it = it_lo; it != S.end() && it + 1 != S.end(); ++it) {
        if (it->v > vc + R) break;
        const Sample &p = *it, &q = *(it + 1);
        const double gp = p.e - target_e, gq = q.e - target_e;
        if (gp == 0.0) {
          ShootSolution& best = out[j];
          if (!best.found || p.a < best.value) {
            best = ShootSolution{};
            best.found = true;
            best.value = p.a;
            best.v0 = p.v;
            best.winding = k;
            best.boundary = std::abs(k) == K;
          }
          continue;
        }
        if ((gp < 0) == (gq < 0)) continue;
        const double vmax = std::max(std::abs(p.v), std::abs(q.v));
        const double pb = std::sqrt(vmax * vmax + 2.0 * osc) + 1e-9;
        const double lower_est = std::max(p.a - pb * std::abs(gp), q.a - pb * std::abs(gq));
        cands.push_back(Candidate{j, k, p.v, q.v, lower_est});
      }
      std::sort(cands.begin(), cands.end(),
                [](const Candidate& a, const Candidate& b) { return a.lower_est < b.lower_est; });
      for (const Candidate& c : cands) {
        if (out[j].found && c.lower_est >= out[j].value - 1e-12) break;
        // Re-fetch the scan values at the bracket edges (samples vector may
        // have grown, but v endpoints identify the bracket).
        Sample lo = scan.eval(c.v_lo);
        bisect(j, target_e, c.winding, c.v_lo, c.v_hi, lo.e - target_e);
      }
    }
  }

  for (std::size_t j = 0; j < targets.size(); ++j) {
    if (!out[j].found) {
      std::ostringstream os;
      os << "shooting failed: x=" << x << " y=" << targets[j] << " tau=" << tau
         << " (scanned " << scan.samples.size() << " velocities)";
      throw SolverError(os.str());
    }
    // Final clean integration at the chosen root: records the terminal
    // velocity and, when asked, the whole minimizing curve.
    Orbit orb;
    RawEndpoint r = integrate_unwrapped(m, x, out[j].v0, tau, opts.dt,
                                        want_orbits ? &orb : nullptr);
    out[j].v_end = r.v;
    out[j].value = r.action;
    if (want_orbits) out[j].orbit = std::move(orb);
  }
  return out;
}

ShootSolution fundamental_solution(const LagrangianModel& m, double t1, double t2,
                                   double x, double y, const ShootOptions& opts,
                                   bool want_orbit) {
  if (!(t2 > t1)) throw DomainError("fundamental_solution: requires t2 > t1");
  auto sols = shoot_row(m, t2 - t1, wrap_unit(x), {wrap_unit(y)}, opts, want_orbit);
  return sols[0];
}

}  // namespace wkot
