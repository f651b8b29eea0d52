#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nbody/series.hpp"
#include "nbody/taylor.hpp"

using namespace nbody;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (double& x : out) x = dist(rng);
  return out;
}

ForceModel softened(std::size_t n) {
  return ForceModel::softened(BodySystem::uniform(std::vector<double>(n, 1.0), 1.0, 0.5));
}

void BM_series_mul(benchmark::State& state) {
  const std::size_t order = static_cast<std::size_t>(state.range(0));
  const PowerSeries a(uniform(order + 1, -1, 1, 1));
  const PowerSeries b(uniform(order + 1, -1, 1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(series_mul(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_series_mul)->RangeMultiplier(2)->Range(8, 64)->Complexity(benchmark::oNSquared);

void BM_series_sqrt(benchmark::State& state) {
  const std::size_t order = static_cast<std::size_t>(state.range(0));
  std::vector<double> c = uniform(order + 1, -0.5, 0.5, 3);
  c[0] = 2.0;
  const PowerSeries a(c);
  for (auto _ : state) benchmark::DoNotOptimize(series_sqrt(a));
}
BENCHMARK(BM_series_sqrt)->RangeMultiplier(2)->Range(8, 64);

// Args: bodies, order.
void BM_taylor_coefficients(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::size_t order = static_cast<std::size_t>(state.range(1));
  const ForceModel model = softened(n);
  const std::vector<double> y = uniform(3 * n, -2, 2, 4);
  const std::vector<double> v = uniform(3 * n, -0.3, 0.3, 5);
  for (auto _ : state) benchmark::DoNotOptimize(taylor_coefficients(model, y, v, order));
}
BENCHMARK(BM_taylor_coefficients)
    ->ArgsProduct({{2, 4, 8, 16}, {10, 20, 40}})
    ->ArgNames({"bodies", "order"});

void BM_integrate(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ForceModel model = softened(n);
  const State start{0.0, uniform(3 * n, -2, 2, 6), uniform(3 * n, -0.3, 0.3, 7)};
  std::size_t steps = 0;
  for (auto _ : state) {
    const Trajectory traj = integrate(model, start, 10.0);
    steps = traj.segments().size();
    benchmark::DoNotOptimize(steps);
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_integrate)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
