#include <benchmark/benchmark.h>

#include <vector>

#include "rscatter/analysis.hpp"
#include "rscatter/engine.hpp"

using namespace rscatter;

namespace {

std::vector<Point> random_sites(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> sites;
  while (sites.size() < n) sites.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
  return sites;
}

void BM_ComputeVoronoi(benchmark::State& state) {
  const auto sites = random_sites(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(compute_voronoi(sites));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeVoronoi)->RangeMultiplier(2)->Range(2, 64)->Complexity();

void BM_SampleInCell(benchmark::State& state) {
  const auto sites = random_sites(8, 2);
  const auto cell = compute_cell(sites, 0);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_in_cell(cell, sites[0], 1.0, rng));
}
BENCHMARK(BM_SampleInCell);

void BM_ScatterStep(benchmark::State& state) {
  Scenario s;
  s.count = static_cast<std::size_t>(state.range(0));
  s.positions.mode = PositionMode::random_with_duplicates;
  s.frames = FrameMode::random;
  Rng rng(4);
  const auto robots = make_robots(s, rng);
  const auto config = initial_configuration(s, rng);
  const auto protocol = make_protocol(s.protocol);
  ActivationSet all;
  for (std::size_t i = 0; i < s.count; ++i) all.push_back(i);
  for (auto _ : state) benchmark::DoNotOptimize(step(config, all, robots, *protocol, s.caps, rng));
}
BENCHMARK(BM_ScatterStep)->Arg(2)->Arg(8)->Arg(32);

void BM_PairTrial(benchmark::State& state) {
  const SchedulerSpec spec{SchedulerKind::full_synchronous, 0.5, 1, 1};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_pair_trial(spec, ++seed, 15));
}
BENCHMARK(BM_PairTrial);

void BM_SsaGpRun(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run(ssa_gp_scenario(n, ++seed, 10000)));
}
BENCHMARK(BM_SsaGpRun)->DenseRange(3, 8, 5);

}  // namespace

BENCHMARK_MAIN();
