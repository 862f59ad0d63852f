#include <benchmark/benchmark.h>

#include <random>

#include "miscls/misclass_kernel.hpp"

using namespace miscls;

namespace {

Dataset mixed_dataset(int n, int p1, int p2, double delta) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Dataset ds;
  ds.p1 = p1;
  ds.p2 = p2;
  ds.z.resize(n, p1 + p2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p1; ++j) ds.z(i, j) = gauss(rng);
    for (int j = 0; j < p2; ++j) ds.z(i, p1 + j) = unif(rng) < 0.5 ? 1.0 : 0.0;
    const int y = unif(rng) < 0.5 ? 1 : 0;
    ds.y.push_back(y);
    ds.y_star.push_back(unif(rng) < 0.8 ? y : 1 - y);
    const bool val = i < static_cast<int>(delta * n);
    ds.in_validation.push_back(val);
    if (val) {
      ds.validation_ids.push_back(i);
    } else {
      ds.y[i] = -1;
    }
  }
  return ds;
}

void BM_grid_evaluator_build(benchmark::State& state) {
  const Dataset ds = mixed_dataset(static_cast<int>(state.range(0)), 18, 2, 0.5);
  for (auto _ : state) {
    KernelGridEvaluator ws(ds, false, 0.9);
    benchmark::DoNotOptimize(ws.p1_effective());
  }
}

void BM_grid_evaluator_gamma(benchmark::State& state) {
  const Dataset ds = mixed_dataset(static_cast<int>(state.range(0)), 18, 2, 0.5);
  const KernelGridEvaluator ws(ds, false, 0.9);
  const auto [hs, oms] = smoothing_grids(ds.n_validation(), 18);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ws.evaluate(hs[4], oms[2]));
  }
}

void BM_estimate_gammas_pca(benchmark::State& state) {
  const Dataset ds = mixed_dataset(static_cast<int>(state.range(0)), 18, 2, 0.5);
  KernelConfig cfg;
  cfg.h = 0.8;
  cfg.omega = 0.05;
  cfg.use_pca = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_gammas(ds, cfg).evaluate_rows(ds.z));
  }
}

}  // namespace

BENCHMARK(BM_grid_evaluator_build)->Arg(1000);
BENCHMARK(BM_grid_evaluator_gamma)->Arg(1000);
BENCHMARK(BM_estimate_gammas_pca)->Arg(1000);

BENCHMARK_MAIN();
