#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "b12scope/stats.hpp"

using namespace b12scope;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> v(n);
  for (auto& x : v) x = z(rng);
  return v;
}

}  // namespace

static void BM_SpearmanExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = normals(n, 1), y = normals(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(stats::spearman(x, y));
}
BENCHMARK(BM_SpearmanExact)->Arg(6)->Arg(8)->Arg(9);

static void BM_SpearmanLarge(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = normals(n, 3), y = normals(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(stats::spearman(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpearmanLarge)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

static void BM_RankSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = normals(n, 5), b = normals(n, 6);
  for (auto _ : state) benchmark::DoNotOptimize(stats::ranksum(a, b));
}
BENCHMARK(BM_RankSum)->Arg(6)->Arg(1000)->Arg(100000);

// One term model: 12 food columns over many users.
static void BM_OlsTwelveColumns(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::poisson_distribution<int> counts(1.0);
  std::bernoulli_distribution flag(0.05);
  stats::Matrix x(n, 12);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 12; ++j) x(i, j) = counts(rng);
    y[i] = flag(rng) ? 1.0 : 0.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::ols_fit(x, y));
}
BENCHMARK(BM_OlsTwelveColumns)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
