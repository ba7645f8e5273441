#include "wkot/common.hpp"

#include <cstring>
#include <mutex>
#include <thread>

namespace wkot {

Matrix min_plus(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw DomainError("min_plus: inner dimensions differ");
  Matrix r(a.rows, b.cols, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      const double* brow = &b.data[k * b.cols];
      double* rrow = &r.data[i * r.cols];
      for (std::size_t j = 0; j < b.cols; ++j) {
        const double v = aik + brow[j];
        if (v < rrow[j]) rrow[j] = v;
      }
    }
  }
  return r;
}

double min_cycle_mean(const Matrix& a) {
  if (a.rows != a.cols || a.rows == 0) throw DomainError("min_cycle_mean: square matrix required");
  const std::size_t n = a.rows;
  // Karp: D[k][v] = min weight of a k-edge walk ending at v (from anywhere).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> D(n + 1, std::vector<double>(n, inf));
  std::fill(D[0].begin(), D[0].end(), 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t v = 0; v < n; ++v) {
      double best = inf;
      for (std::size_t u = 0; u < n; ++u) {
        const double cand = D[k - 1][u] + a(u, v);
        if (cand < best) best = cand;
      }
      D[k][v] = best;
    }
  }
  double mu = inf;
  for (std::size_t v = 0; v < n; ++v) {
    double worst = -inf;
    for (std::size_t k = 0; k < n; ++k) {
      if (D[k][v] == inf) continue;
      worst = std::max(worst, (D[n][v] - D[k][v]) / double(n - k));
    }
    if (worst > -inf) mu = std::min(mu, worst);
  }
  return mu;
}

Matrix min_plus_closure(const Matrix& a, int max_doublings) {
  if (a.rows != a.cols) throw DomainError("min_plus_closure: square matrix required");
  Matrix best = a;
  Matrix power = a;
  for (int d = 0; d < max_doublings; ++d) {
    power = min_plus(power, power);
    bool changed = false;
    for (std::size_t i = 0; i < best.data.size(); ++i) {
      if (power.data[i] < best.data[i] - 1e-15) changed = true;
      best.data[i] = std::min(best.data[i], power.data[i]);
    }
    if (!changed) break;
  }
  return best;
}

unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* env = std::getenv("WEAKKAM_OT_THREADS");
  if (env && *env) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0 && v < 1024) return static_cast<unsigned>(v);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(thread_budget(), n ? n : 1);
  if (workers <= 1 || n < 2) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wkot
