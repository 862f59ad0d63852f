#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "miscls/rng.hpp"
#include "miscls/simulate.hpp"

using namespace miscls;

TEST_CASE("generator marginals: mean, variance, lag-1 correlation") {
  const SimSetting st = SimSetting::by_name("I", 100000);
  auto rng = make_stream(123, 0);
  const Eigen::MatrixXd z = generate_covariates(st, st.n, rng);
  const double bound = 4.0 / std::sqrt(static_cast<double>(st.n));
  for (int j = 0; j < 18; ++j) {
    const double mean = z.col(j).mean();
    const double var = (z.col(j).array() - mean).square().sum() / (st.n - 1);
    CHECK(std::fabs(mean) < bound);
    CHECK(std::fabs(var - 1.0) < 0.15);
  }
  for (int j = 0; j + 1 < 18; ++j) {
    const auto a = z.col(j).array() - z.col(j).mean();
    const auto b = z.col(j + 1).array() - z.col(j + 1).mean();
    const double corr = (a * b).sum() / std::sqrt(a.square().sum() * b.square().sum());
    CHECK(std::fabs(corr - 0.5) < 0.02);
  }
  // discrete columns are fair coins
  for (int j = 18; j < 20; ++j) {
    CHECK(std::fabs(z.col(j).mean() - 0.5) < 0.01);
  }
}

TEST_CASE("amr increases with alpha0") {
  double prev = 0.0;
  for (double a0 : {-2.15, -1.01, 0.0}) {
    SimSetting st = SimSetting::by_name("I", 4000);
    st.alpha0 = a0;
    const Dataset ds = generate_dataset(st, 5);
    const double mr = misclassification_rate(ds);
    CHECK(mr > prev);
    prev = mr;
  }
}

TEST_CASE("varrho is inert when eta=0") {
  SimSetting a = SimSetting::by_name("I", 500);
  SimSetting b = a;
  b.varrho = 3.33;
  const Dataset da = generate_dataset(a, 42);
  const Dataset db = generate_dataset(b, 42);
  CHECK(da.y_star == db.y_star);
  CHECK(da.y == db.y);
  CHECK((da.z - db.z).norm() == 0.0);
}

TEST_CASE("setting AMR calibration at modest replication counts") {
  double amr1 = 0.0, amr4 = 0.0;
  const int reps = 10;
  for (int j = 0; j < reps; ++j) {
    amr1 += misclassification_rate(generate_dataset(SimSetting::by_name("I", 1000), 100 + j));
    amr4 += misclassification_rate(generate_dataset(SimSetting::by_name("IV", 1000), 100 + j));
  }
  amr1 /= reps;
  amr4 /= reps;
  CHECK(amr1 > 0.18);
  CHECK(amr1 < 0.26);
  CHECK(amr4 > 0.32);
  CHECK(amr4 < 0.40);
}

namespace {

ReplicationRecord perfect_record(const SimSetting& st, int rep) {
  ReplicationRecord r;
  r.rep = rep;
  r.seed = rep;
  r.ok = true;
  r.mr = 0.2;
  r.beta0_star = st.beta0_star_true;
  r.beta = st.beta_true;
  r.se = Eigen::VectorXd::Constant(st.p, 0.1);
  return r;
}

}  // namespace

TEST_CASE("compute_metrics hand cases") {
  const SimSetting st = SimSetting::by_name("I", 100);
  auto rng = make_stream(9, 2);
  const Eigen::MatrixXd holdout = generate_covariates(st, 500, rng);

  SUBCASE("perfect estimates") {
    std::vector<ReplicationRecord> recs{perfect_record(st, 0), perfect_record(st, 1)};
    const MetricsReport rep = compute_metrics(recs, st, holdout);
    CHECK(rep.ame == 0.0);
    CHECK(rep.false_nonzero == 0.0);
    CHECK(rep.false_zero == 0.0);
    for (const auto& c : rep.coefficients) {
      CHECK(c.bias == 0.0);
      CHECK(c.mse == 0.0);
      CHECK(c.cr == 1.0);
    }
    CHECK(rep.coefficients.size() == 5);
  }

  SUBCASE("all-zero estimator") {
    ReplicationRecord r = perfect_record(st, 0);
    r.beta = Eigen::VectorXd::Zero(st.p);
    r.beta0_star = 0.0;
    const MetricsReport rep = compute_metrics({r}, st, holdout);
    CHECK(rep.false_zero == 5.0);
    CHECK(rep.false_nonzero == 0.0);
  }

  SUBCASE("three-replication toy bias/esd/mse") {
    std::vector<ReplicationRecord> recs;
    const double vals[3] = {1.9, 2.1, 2.3};
    for (int j = 0; j < 3; ++j) {
      ReplicationRecord r = perfect_record(st, j);
      r.beta(0) = vals[j];
      recs.push_back(r);
    }
    const MetricsReport rep = compute_metrics(recs, st, holdout);
    const auto& c0 = rep.coefficients[0];
    CHECK(c0.index == 0);
    CHECK(c0.bias == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(c0.esd == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(c0.mse ==
          doctest::Approx((0.01 + 0.01 + 0.09) / 3.0).epsilon(1e-12));
  }

  SUBCASE("failed replications are excluded but counted") {
    ReplicationRecord bad;
    bad.rep = 1;
    bad.ok = false;
    bad.beta = Eigen::VectorXd::Zero(st.p);
    bad.se = Eigen::VectorXd::Zero(st.p);
    const MetricsReport rep = compute_metrics({perfect_record(st, 0), bad}, st, holdout);
    CHECK(rep.m_total == 2);
    CHECK(rep.m_used == 1);
    CHECK(rep.m_failed == 1);
    CHECK(rep.ame == 0.0);
  }
}

TEST_CASE("per-replication counts satisfy the partition identity") {
  const SimSetting st = SimSetting::by_name("I", 100);
  auto rng = make_stream(4, 2);
  const Eigen::MatrixXd holdout = generate_covariates(st, 200, rng);
  ReplicationRecord r = perfect_record(st, 0);
  r.beta(0) = 0.0;   // one missed signal
  r.beta(2) = 0.5;   // one false discovery
  const MetricsReport rep = compute_metrics({r}, st, holdout);
  CHECK(rep.false_zero == 1.0);
  CHECK(rep.false_nonzero == 1.0);
  // p - s = 15, s = 5
  CHECK(rep.false_nonzero >= 0.0);
  CHECK(rep.false_nonzero <= 15.0);
  CHECK(rep.false_zero <= 5.0);
}

TEST_CASE("run_replications is reproducible end to end") {
  SimSetting st = SimSetting::by_name("I", 200);
  RunSpec spec;
  spec.method = Method::naive;
  spec.options.penalty = PenaltyKind::scad;
  spec.replications = 1;
  spec.delta = 0.5;
  spec.base_seed = 31;
  spec.holdout_size = 500;

  const RunOutput a = run_replications(st, spec);
  const RunOutput b = run_replications(st, spec);
  CHECK(a.report.ame == b.report.ame);
  CHECK(a.report.amr == b.report.amr);
  REQUIRE(a.records.size() == 1);
  CHECK(a.records[0].beta == b.records[0].beta);

  // threads do not change the outcome
  spec.replications = 3;
  spec.threads = 3;
  const RunOutput c = run_replications(st, spec);
  spec.threads = 1;
  const RunOutput d = run_replications(st, spec);
  CHECK(c.report.ame == d.report.ame);
  for (int j = 0; j < 3; ++j) CHECK(c.records[j].beta == d.records[j].beta);
}
