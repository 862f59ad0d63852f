#include <benchmark/benchmark.h>

#include <random>

#include "miscls/fitters.hpp"
#include "miscls/path.hpp"

using namespace miscls;

namespace {

Dataset logistic_dataset(int n, int p) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Dataset ds;
  ds.p1 = p;
  ds.p2 = 0;
  ds.z.resize(n, p);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  beta(0) = 1.5;
  beta(1) = -1.0;
  beta(4) = 0.8;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) ds.z(i, j) = gauss(rng);
    const double mu = 1.0 / (1.0 + std::exp(-(0.5 + beta.dot(ds.z.row(i)))));
    const int y = unif(rng) < mu ? 1 : 0;
    ds.y.push_back(y);
    ds.y_star.push_back(y);
    ds.in_validation.push_back(1);
    ds.validation_ids.push_back(i);
  }
  return ds;
}

void BM_prox_operator(benchmark::State& state) {
  const PenaltySpec scad(PenaltyKind::scad, 0.4, 3.7);
  double x = -3.0;
  for (auto _ : state) {
    x += 0.001;
    if (x > 3.0) x = -3.0;
    benchmark::DoNotOptimize(penalty_prox(scad, x, 0.7));
  }
}

void BM_full_scad_path(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dataset ds = logistic_dataset(n, 20);
  const PluggedLik pl = make_plugged_naive(ds, LinkKind::logit);
  const PenaltySpec pen(PenaltyKind::scad, 0.0, 3.7);
  const int p = ds.p();
  PathConfig cfg;
  for (auto _ : state) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1 + p);
    std::vector<char> mask(1 + p, 1);
    mask[0] = 0;
    const Eigen::VectorXd g0 = -pl.score(0.0, Eigen::VectorXd::Zero(p)).tail(p) / n;
    const auto grid = lambda_grid(g0, n, p, cfg);
    auto family = [&](double lam) {
      const PenaltySpec at = pen.with_lambda(lam);
      SmoothProblem sp;
      sp.value = [&pl, at, p](const Eigen::VectorXd& v) {
        return -pl.loglik(v(0), v.tail(p)) / pl.n() + concave_part_value(at, v.tail(p));
      };
      sp.gradient = [&pl, at, p](const Eigen::VectorXd& v) {
        Eigen::VectorXd g = -pl.score(v(0), v.tail(p)) / pl.n();
        g.tail(p) += concave_part_gradient(at, v.tail(p));
        return g;
      };
      return sp;
    };
    benchmark::DoNotOptimize(apf_path(family, grid, x0, mask, cfg));
  }
}

}  // namespace

BENCHMARK(BM_prox_operator);
BENCHMARK(BM_full_scad_path)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
