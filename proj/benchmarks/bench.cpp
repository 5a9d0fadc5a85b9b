#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "enthom/capacity.hpp"
#include "enthom/channel.hpp"
#include "enthom/density.hpp"
#include "enthom/random_maps.hpp"

using namespace enthom;

namespace {

Density random_density(std::size_t n, std::uint64_t seed) {
  Grid g(0.0, 1.0, n);
  std::mt19937_64 rng(seed);
  std::vector<double> w(n);
  for (double& x : w) x = std::uniform_real_distribution<>(0.05, 1.0)(rng);
  return Density(g, w);
}

Channel gaussian_channel(std::size_t n, double sigma) {
  Grid g(0.0, 1.0, n);
  return Channel::gaussian(g, g, [](double e) { return e; },
                           [sigma](double) { return sigma; });
}

void bm_entropy(benchmark::State& state) {
  Density d = random_density(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(d.entropy_bits());
}
BENCHMARK(bm_entropy)->Arg(1024)->Arg(4096)->Arg(16384);

void bm_pushforward(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Density d = random_density(n, 12);
  std::mt19937_64 rng(13);
  IncreasingMap m = random_increasing_map(rng, 0.0, 1.0);
  Grid target(m.y_lo(), m.y_hi(), n);
  for (auto _ : state) benchmark::DoNotOptimize(pushforward(d, m, target));
}
BENCHMARK(bm_pushforward)->Arg(1024)->Arg(4096);

void bm_mutual_information(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Channel ch = gaussian_channel(n, 0.05);
  InputDistribution fe = uniform_input(ch);
  for (auto _ : state) benchmark::DoNotOptimize(mutual_information(ch, fe));
}
BENCHMARK(bm_mutual_information)->Arg(256)->Arg(1024);

void bm_capacity_iterations(benchmark::State& state) {
  Channel ch = gaussian_channel(static_cast<std::size_t>(state.range(0)), 0.05);
  SolverOptions opt;
  opt.tol = 0.0;  // unreachable: fixed 25-iteration workload
  opt.max_iter = 25;
  for (auto _ : state) benchmark::DoNotOptimize(solve_capacity(ch, opt));
}
BENCHMARK(bm_capacity_iterations)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
