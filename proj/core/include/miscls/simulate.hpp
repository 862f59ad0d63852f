#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "miscls/dataset.hpp"
#include "miscls/fitters.hpp"

namespace miscls {

// Data-generating configuration: AR(0.5) normal covariates plus two Bernoulli
// columns, logistic response, misclassification mixing a quadratic CDF term
// with a linear-logistic term.
struct SimSetting {
  std::string name = "I";
  double eta = 0.0;
  double alpha0 = -2.15;
  Eigen::VectorXd alpha1;
  double varrho = 0.0;  // mean of the CDF component, inert when eta = 0
  int n = 1000;
  int p = 20;
  Eigen::VectorXd beta_true;
  double beta0_star_true = 1.0;
  LinkKind link = LinkKind::logit;

  int s_true() const;  // number of nonzero true coefficients
  static SimSetting by_name(const std::string& name, int n = 1000);
};

// Covariate draws only (used for the model-error holdout).
Eigen::MatrixXd generate_covariates(const SimSetting& st, int count, std::mt19937_64& rng);

// Full draw with the true response retained on every row (validation = all).
Dataset generate_dataset(const SimSetting& st, std::uint64_t seed);

// Fraction of rows with y* != y; requires y on every row.
double misclassification_rate(const Dataset& ds);

struct ReplicationRecord {
  int rep = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double mr = 0.0;  // misclassification rate of the generated sample
  double me = 0.0;  // model error against the holdout (filled by compute_metrics)
  double beta0_star = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd se;  // per-coefficient SE, 0 off support
  bool fit_converged = true;
};

struct CoefficientSummary {
  int index = 0;  // 0-based coefficient index
  double truth = 0.0;
  double bias = 0.0;
  double esd = 0.0;
  double mse = 0.0;
  double cr = 0.0;  // coverage of 1.96*SE intervals
};

struct MetricsReport {
  double ame = 0.0;
  double false_nonzero = 0.0;
  double false_zero = 0.0;
  double amr = 0.0;
  std::vector<CoefficientSummary> coefficients;  // the truly nonzero coefficients
  int m_total = 0;
  int m_used = 0;
  int m_failed = 0;
  std::string rng_name;
};

struct RunSpec {
  Method method = Method::parametric;
  FitOptions options;
  int replications = 50;
  double delta = 0.5;
  std::uint64_t base_seed = 1;
  int threads = 1;
  int holdout_size = 10000;
};

struct RunOutput {
  MetricsReport report;
  std::vector<ReplicationRecord> records;
};

MetricsReport compute_metrics(const std::vector<ReplicationRecord>& records, const SimSetting& st,
                              const Eigen::MatrixXd& holdout_z);

RunOutput run_replications(const SimSetting& st, const RunSpec& spec);

}  // namespace miscls
