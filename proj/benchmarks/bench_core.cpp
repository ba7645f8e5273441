// Microbenchmarks for the hot paths: the transform pair, min-plus table
// algebra, the exact transport solver, and evolution by a fundamental table.
// Shooting-based table construction is benchmarked once at a small size; its
// cost is dominated by ODE integration and scales linearly in grid.size()^2.

#include "wkot/clax.hpp"
#include "wkot/fundamental.hpp"
#include "wkot/kantorovich.hpp"
#include "wkot/model.hpp"
#include "wkot/rlo.hpp"
#include "wkot/space.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace wkot;

namespace {

Matrix rand_matrix(std::size_t n, std::size_t m, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix out(n, m);
  for (double& v : out.data) v = u(rng);
  return out;
}

Potential rand_pot(std::size_t n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return Potential(std::move(v));
}

ProbMeasure rand_meas(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double acc = 0.0;
  for (double& x : w) acc += (x = u(rng));
  for (double& x : w) x /= acc;
  return ProbMeasure(std::move(w));
}

void bm_t_minus(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const CostTable c(rand_matrix(n, n, 1, -5.0, 5.0));
  const Potential phi = rand_pot(n, 2, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(t_minus(phi, c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_t_minus)->Arg(32)->Arg(128)->Arg(512)->Complexity(benchmark::oNSquared);

void bm_commutator_defect(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const CostTable c(rand_matrix(n, n, 3, -5.0, 5.0));
  const Potential psi = rand_pot(n, 4, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(commutator_defect(psi, c));
}
BENCHMARK(bm_commutator_defect)->Arg(64)->Arg(256);

void bm_min_plus(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const Matrix a = rand_matrix(n, n, 5, 0.0, 1.0);
  const Matrix b = rand_matrix(n, n, 6, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(min_plus(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_min_plus)->Arg(32)->Arg(64)->Arg(128)->Complexity(benchmark::oNCubed);

void bm_min_plus_closure(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  Matrix a = rand_matrix(n, n, 7, 0.1, 1.0);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(min_plus_closure(a));
}
BENCHMARK(bm_min_plus_closure)->Arg(64);

void bm_solve_kantorovich(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const ProbMeasure mu = rand_meas(n, 8), nu = rand_meas(n, 9);
  const CostTable c(rand_matrix(n, n, 10, 0.0, 5.0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_kantorovich(mu, nu, c));
}
BENCHMARK(bm_solve_kantorovich)->Arg(8)->Arg(32)->Arg(64);

void bm_wasserstein1(benchmark::State& state) {
  const TorusGrid grid(1, 64);
  const Matrix metric = grid.metric_table();
  const ProbMeasure mu = rand_meas(grid.size(), 11), nu = rand_meas(grid.size(), 12);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_p(mu, nu, metric, 1));
}
BENCHMARK(bm_wasserstein1);

void bm_evolve(benchmark::State& state) {
  const TorusGrid grid(1, 64);
  static const FundamentalTable table =
      build_fundamental_table(LagrangianModel::free_model(), grid, 0.0, 0.25);
  const Potential phi = rand_pot(grid.size(), 13, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(evolve(table, phi, Evolution::min_plus));
}
BENCHMARK(bm_evolve);

void bm_fundamental_table(benchmark::State& state) {
  const LagrangianModel m = LagrangianModel::pendulum(0.25);
  const TorusGrid grid(1, int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(build_fundamental_table(m, grid, 0.0, 0.25));
}
BENCHMARK(bm_fundamental_table)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
