#include <benchmark/benchmark.h>

#include "usab/ga.hpp"
#include "usab/scoring.hpp"

namespace {

void BM_DemoEvolve(benchmark::State& state) {
  usab::GaConfig cfg;
  cfg.target_fitness = 1.0;
  const auto problem = usab::demo_problem();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(usab::evolve(problem, cfg, usab::RngSpec{seed++}));
}
BENCHMARK(BM_DemoEvolve);

void BM_ScoreFeatures(benchmark::State& state) {
  const std::size_t n = 200;
  const std::size_t d = 7;
  usab::Rng rng(3);
  usab::ScoringProblem p;
  p.matrix.values = usab::Matrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += p.matrix.values(i, j) = rng.uniform01();
    p.targets.push_back(s / static_cast<double>(d));
  }
  for (std::size_t j = 0; j < d; ++j) p.matrix.feature_names.push_back("f" + std::to_string(j));
  auto ga = usab::default_scoring_ga(d);
  ga.max_generations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(usab::score_features(p, ga, usab::RngSpec{4}));
}
BENCHMARK(BM_ScoreFeatures)->Arg(50)->Arg(300);

}  // namespace
