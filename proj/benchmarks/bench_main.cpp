#include <benchmark/benchmark.h>

#include "flowermatch/experiments.hpp"
#include "flowermatch/matching.hpp"
#include "flowermatch/montecarlo.hpp"
#include "flowermatch/unscented.hpp"

namespace {

using namespace flowermatch;

Cluster cluster_of(std::size_t n) {
  auto stream = rng::make_stream(kDefaultSeed, rng::Domain::InitialCluster);
  return simulate_initial_cluster(n, stream);
}

void BM_UtDistribution(benchmark::State& state) {
  const Cluster c = cluster_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ut_descriptor_distribution(c, NoiseModel{}, UtParams{}));
}
BENCHMARK(BM_UtDistribution)->DenseRange(3, 6);

void BM_McStats(benchmark::State& state) {
  const Cluster c = cluster_of(3);
  McConfig cfg;
  cfg.trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_descriptor_stats(c, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McStats)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_MatchDatasets(benchmark::State& state) {
  SyntheticDatasetConfig cfg;
  cfg.frames = static_cast<std::size_t>(state.range(0));
  const Dataset d = generate_synthetic_dataset(cfg).dataset;
  MatchRunOptions opts;
  opts.keep_pairs = false;
  for (auto _ : state) benchmark::DoNotOptimize(match_datasets(d, d, NoiseModel{}, UtParams{}, MatchConfig{}, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_MatchDatasets)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GateEvaluation(benchmark::State& state) {
  const auto dist = ut_descriptor_distribution(cluster_of(3), NoiseModel{}, UtParams{});
  const MahalanobisGate gate(dist);
  Eigen::Vector2d x = dist.mean;
  for (auto _ : state) {
    x(0) += 1e-9;
    benchmark::DoNotOptimize(is_match(x, 3, gate, 5.991464547107979, true));
  }
}
BENCHMARK(BM_GateEvaluation);

}  // namespace

BENCHMARK_MAIN();
