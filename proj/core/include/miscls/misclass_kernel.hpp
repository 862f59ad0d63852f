#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "miscls/dataset.hpp"

namespace miscls {

struct KernelConfig {
  double h = 1.0;              // shared bandwidth for continuous coordinates
  double omega = 0.0;          // discrete smoothing parameter in [0,1]
  bool use_pca = false;        // project continuous covariates first
  double pca_variance_threshold = 0.90;
};

// Mean/loadings of a PCA fitted on validation continuous covariates.
struct PcaTransform {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // p1 x k, orthonormal columns
  int retained() const { return static_cast<int>(components.cols()); }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

PcaTransform fit_pca(const Eigen::MatrixXd& x, double variance_threshold);

// Product kernel weight between z_i and z (continuous-first layout):
//   [h^{-p1} prod_t phi((z_it - z_t)/h)]^{1{p1>0}} * [omega^{#mismatches}]^{1{p2>0}}.
double kernel_weight(const KernelConfig& cfg, const Eigen::VectorXd& z_i,
                     const Eigen::VectorXd& z, int p1, int p2);

// Per-row misclassification probabilities plus evaluation diagnostics.
struct GammaValues {
  Eigen::VectorXd g01;
  Eigen::VectorXd g10;
  long fallback_count = 0;   // degenerate kernel denominators
  long sum_clamp_count = 0;  // g01 + g10 >= 1 events
  bool all_fallback = false;
};

// Nonparametric estimator of (gamma01, gamma10) fitted on validation rows.
class GammaTable {
 public:
  GammaTable() = default;

  // gamma pair at a raw covariate vector (length p of the training dataset).
  std::pair<double, double> evaluate(const Eigen::VectorXd& z) const;

  // gamma pair at every row of a raw covariate matrix.
  GammaValues evaluate_rows(const Eigen::MatrixXd& z) const;

  double h() const { return h_; }
  double omega() const { return omega_; }
  int p1_effective() const { return static_cast<int>(vc_.cols()); }
  const std::optional<PcaTransform>& pca() const { return pca_; }

 private:
  friend GammaTable estimate_gammas(const Dataset& ds, const KernelConfig& cfg);
  friend class KernelGridEvaluator;

  Eigen::MatrixXd vc_;    // validation continuous coords (kernel space)
  Eigen::MatrixXd vd_;    // validation discrete coords
  std::vector<int> vy_, vystar_;
  double h_ = 1.0, omega_ = 0.0;
  int p1_raw_ = 0, p2_ = 0;
  double fallback_g10_ = 0.0, fallback_g01_ = 0.0;
  std::optional<PcaTransform> pca_;
};

GammaTable estimate_gammas(const Dataset& ds, const KernelConfig& cfg);

// Candidate bandwidth/smoothing grids keyed to the validation sample size:
// 10 h values on [0.5, 2] * n_v^{-1/(4+p1)}, 5 omega values on
// [0.5, 2] * n_v^{-2/(4+p1)} capped at 1.
std::pair<std::vector<double>, std::vector<double>> smoothing_grids(int n_v, int p1_eff);

// Shares the pairwise distance/mismatch tables between every (h, omega) grid
// point when evaluating gamma at all rows of one dataset.
class KernelGridEvaluator {
 public:
  KernelGridEvaluator(const Dataset& ds, bool use_pca, double pca_variance_threshold);
  int p1_effective() const { return p1_eff_; }
  const std::optional<PcaTransform>& pca() const { return pca_; }
  GammaValues evaluate(double h, double omega) const;

 private:
  Eigen::MatrixXd d2_;    // n x n_v squared distances, continuous block
  Eigen::MatrixXi mism_;  // n x n_v discrete mismatch counts
  std::vector<int> vy_, vystar_;
  int p1_eff_ = 0, p2_ = 0, n_ = 0;
  double fallback_g10_ = 0.0, fallback_g01_ = 0.0;
  std::optional<PcaTransform> pca_;
};

}  // namespace miscls
