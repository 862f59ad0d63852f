#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "miscls/fitters.hpp"
#include "miscls/simulate.hpp"
#include "test_helpers.hpp"

using namespace miscls;

namespace {

PluggedLik tiny_plugged(const Dataset& ds) { return make_plugged_naive(ds, LinkKind::logit); }

Dataset clean_dataset(int n, int p, std::mt19937_64& rng, double delta) {
  Dataset ds = testutil::random_dataset(n, p, rng, 1.0);
  for (int i = 0; i < ds.n(); ++i) ds.y_star[i] = ds.y[i];
  return make_validation_split(ds, delta, 99);
}

}  // namespace

TEST_CASE("effective_df equals 1+|support| when rho'' vanishes") {
  std::mt19937_64 rng(1);
  const Dataset ds = testutil::random_dataset(100, 4, rng, 1.0);
  const PluggedLik pl = tiny_plugged(ds);
  Eigen::VectorXd beta(4);
  beta << 1.2, 0.0, -0.8, 0.0;
  const std::vector<int> support{0, 2};

  const PenaltySpec l1(PenaltyKind::l1, 0.3, 0.0);
  CHECK(effective_df(pl, 0.1, beta, support, l1) == doctest::Approx(3.0).epsilon(1e-10));

  // SCAD with all |beta_j| > a*lambda
  const PenaltySpec scad(PenaltyKind::scad, 0.1, 3.7);
  CHECK(effective_df(pl, 0.1, beta, support, scad) == doctest::Approx(3.0).epsilon(1e-10));

  // empty support: intercept only
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  CHECK(effective_df(pl, 0.1, zero, {}, scad) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("effective_df matches a direct 2x2 matrix evaluation") {
  Dataset ds;
  ds.p1 = 1;
  ds.p2 = 0;
  ds.z.resize(3, 1);
  ds.z << 0.5, -1.0, 2.0;
  ds.y_star = {1, 0, 1};
  ds.y = {1, 0, 1};
  ds.in_validation = {1, 1, 1};
  ds.validation_ids = {0, 1, 2};
  const PluggedLik pl = tiny_plugged(ds);

  Eigen::VectorXd beta(1);
  beta << 0.6;
  const PenaltySpec scad(PenaltyKind::scad, 0.5, 3.7);  // 0.5 < 0.6 < 1.85: rho'' = -1/2.7

  Eigen::Matrix2d i11 = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 3; ++i) {
    const double mu = expit(0.2 + 0.6 * ds.z(i, 0));
    Eigen::Vector2d x(1.0, ds.z(i, 0));
    i11 += mu * (1.0 - mu) * x * x.transpose();  // naive rows: q w^2 = mu(1-mu)
  }
  i11 /= 3.0;
  Eigen::Matrix2d m = i11;
  m(1, 1) += -1.0 / 2.7;
  const double want = (i11 * m.inverse()).trace();
  CHECK(effective_df(pl, 0.2, beta, {0}, scad) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("deviance closed forms and nonnegativity") {
  Dataset ds;
  ds.p1 = 1;
  ds.p2 = 0;
  ds.z.resize(1, 1);
  ds.z << 0.0;
  ds.y_star = {1};
  ds.y = {1};
  ds.in_validation = {1};
  ds.validation_ids = {0};
  GammaValues gv = gamma_values_zero(1);
  const PluggedLik pl = make_plugged(ds, LinkKind::logit, gv);

  // single validated row y=1, mu=0.5
  CHECK(deviance(pl, 0.0, Eigen::VectorXd::Zero(1)) ==
        doctest::Approx(1.3862943611198906).epsilon(1e-12));
  // near-perfect fit
  CHECK(deviance(pl, 40.0, Eigen::VectorXd::Zero(1)) < 1e-6);

  std::mt19937_64 rng(3);
  const Dataset big = testutil::random_dataset(60, 2, rng, 0.5);
  const PluggedLik pl2 = make_plugged(big, LinkKind::logit, gamma_values_zero(60));
  for (int rep = 0; rep < 10; ++rep) {
    const ParamVector th = testutil::random_theta(2, rng, false);
    CHECK(deviance(pl2, th.beta0_star, th.beta) >= 0.0);
  }
}

TEST_CASE("select_model arithmetic and tie-breaking") {
  std::vector<TuneCandidate> cands(2);
  cands[0].lambda = 0.5;
  cands[0].df = 5.0;
  cands[0].deviance = 50.0;
  cands[1].lambda = 0.3;
  cands[1].df = 5.0;
  cands[1].deviance = 50.0;
  const int pick = select_model(cands, 100, Criterion::gcv);
  CHECK(pick == 0);  // tie goes to the larger lambda
  CHECK(cands[0].gcv == doctest::Approx(0.554016620498615).epsilon(1e-12));
  CHECK(cands[0].bic == doctest::Approx(96.05170185988092).epsilon(1e-12));

  // equal deviance, smaller df wins under both criteria
  cands[1].df = 3.0;
  CHECK(select_model(cands, 100, Criterion::gcv) == 1);
  CHECK(select_model(cands, 100, Criterion::bic) == 1);

  // df >= n excluded
  cands[1].df = 120.0;
  CHECK(select_model(cands, 100, Criterion::gcv) == 0);
  CHECK(cands[1].excluded);
}

TEST_CASE("clean-data reduction: the three methods agree (SCAD)") {
  std::mt19937_64 rng(7);
  const Dataset ds = clean_dataset(400, 5, rng, 0.5);
  FitOptions opt;
  opt.penalty = PenaltyKind::scad;
  opt.criterion = Criterion::gcv;
  opt.force_zero_gamma = true;

  const FitResult fn = fit_naive(ds, opt);
  const FitResult fp = fit_parametric(ds, opt);
  const FitResult fs = fit_semiparametric(ds, opt);

  CHECK(fn.support == fp.support);
  CHECK(fn.support == fs.support);
  for (int j = 0; j < 5; ++j) {
    CHECK(fn.beta(j) == doctest::Approx(fp.beta(j)).epsilon(1e-4));
    CHECK(fn.beta(j) == doctest::Approx(fs.beta(j)).epsilon(1e-4));
  }
  CHECK(fn.beta0_star == doctest::Approx(fp.beta0_star).epsilon(1e-3));
}

TEST_CASE("fits are deterministic and sparse with exact zeros") {
  std::mt19937_64 rng(17);
  const Dataset ds = testutil::random_dataset(300, 6, rng, 0.5, 1.0);
  FitOptions opt;
  opt.penalty = PenaltyKind::scad;
  const FitResult a = fit_parametric(ds, opt);
  const FitResult b = fit_parametric(ds, opt);
  CHECK(a.beta == b.beta);
  CHECK(a.lambda == b.lambda);
  for (int j = 0; j < 6; ++j) {
    const bool in_support =
        std::find(a.support.begin(), a.support.end(), j) != a.support.end();
    if (!in_support) CHECK(a.beta(j) == 0.0);
  }
}

TEST_CASE("selected parametric model satisfies the penalized score equation") {
  std::mt19937_64 rng(23);
  const Dataset ds = testutil::random_dataset(400, 5, rng, 0.5, 1.0);
  FitOptions opt;
  opt.penalty = PenaltyKind::scad;
  const FitResult fit = fit_parametric(ds, opt);
  REQUIRE(fit.nu.has_value());
  const GammaValues gv = gamma_values_from_nu(ds, *fit.nu);
  const PluggedLik pl = make_plugged(ds, LinkKind::logit, gv);
  CHECK(kkt_residual(pl, fit.beta0_star, fit.beta, fit.penalty) <= 1e-3);
}

TEST_CASE("semiparametric fit with saturated discrete kernel matches parametric at delta=1") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif;
  const int n = 1200;
  Dataset ds;
  ds.p1 = 0;
  ds.p2 = 2;
  ds.z.resize(n, 2);
  ds.y.resize(n);
  ds.y_star.resize(n);
  ds.in_validation.assign(n, 1);
  for (int i = 0; i < n; ++i) {
    ds.validation_ids.push_back(i);
    ds.z(i, 0) = unif(rng) < 0.5 ? 1.0 : 0.0;
    ds.z(i, 1) = unif(rng) < 0.5 ? 1.0 : 0.0;
    const double mu = expit(0.5 + 1.2 * ds.z(i, 0) - 0.9 * ds.z(i, 1));
    const int y = unif(rng) < mu ? 1 : 0;
    const double g = expit(-2.0 + 0.8 * ds.z(i, 0) - 0.5 * ds.z(i, 1));
    ds.y[i] = y;
    ds.y_star[i] = unif(rng) < ((y == 1) ? 1.0 - g : g) ? 1 : 0;
  }
  FitOptions opt;
  opt.penalty = PenaltyKind::scad;
  opt.fixed_omega = 0.0;
  const FitResult fs = fit_semiparametric(ds, opt);
  const FitResult fp = fit_parametric(ds, opt);
  for (int j = 0; j < 2; ++j) CHECK(std::fabs(fs.beta(j) - fp.beta(j)) < 0.02);
}

TEST_CASE("gcv/bic statistics formulas") {
  CHECK(gcv_statistic(50.0, 5.0, 100) == doctest::Approx(0.554016620498615).epsilon(1e-12));
  CHECK(bic_statistic(50.0, 5.0, 100) == doctest::Approx(96.05170185988092).epsilon(1e-12));
}
