#include <benchmark/benchmark.h>

#include <random>

#include "miscls/objective.hpp"

using namespace miscls;

namespace {

Dataset sample_dataset(int n, int p, double delta) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Dataset ds;
  ds.p1 = p;
  ds.p2 = 0;
  ds.z.resize(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) ds.z(i, j) = gauss(rng);
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

ParamVector sample_theta(int p) {
  ParamVector theta;
  theta.beta0_star = 0.3;
  theta.beta = Eigen::VectorXd::Constant(p, 0.2);
  NuVector nu = NuVector::zeros(p);
  nu.nu1 = -1.5;
  nu.nu3 = -1.5;
  theta.nu = nu;
  return theta;
}

void BM_loglik_param(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dataset ds = sample_dataset(n, 20, 0.5);
  const ParamVector theta = sample_theta(20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loglik_param(theta, ds, LinkKind::logit));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_score_param(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dataset ds = sample_dataset(n, 20, 0.5);
  const ParamVector theta = sample_theta(20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_param(theta, ds, LinkKind::logit));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_plugged_score(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dataset ds = sample_dataset(n, 20, 0.5);
  const ParamVector theta = sample_theta(20);
  const PluggedLik pl = make_plugged(ds, LinkKind::logit, gamma_values_from_nu(ds, *theta.nu));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pl.score(theta.beta0_star, theta.beta));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

}  // namespace

BENCHMARK(BM_loglik_param)->Arg(1000)->Arg(4000);
BENCHMARK(BM_score_param)->Arg(1000)->Arg(4000);
BENCHMARK(BM_plugged_score)->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
