#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "miscls/dataset.hpp"
#include "miscls/links.hpp"
#include "miscls/misclass_kernel.hpp"
#include "miscls/misclass_param.hpp"

namespace miscls {

// Full parameter vector theta = (beta0*, beta, nu); index map
// [0] intercept | [1..p] beta | [1+p ..) flattened nu.
struct ParamVector {
  double beta0_star = 0.0;
  Eigen::VectorXd beta;
  std::optional<NuVector> nu;

  int dim() const {
    return 1 + static_cast<int>(beta.size()) + (nu ? nu->q() : 0);
  }
};

struct ObjectiveDiagnostics {
  long clamp_events = 0;
};

GammaValues gamma_values_zero(int n);
GammaValues gamma_values_from_nu(const Dataset& ds, const NuVector& nu);

// Observed-data log-likelihood and score for the parametric formulation.
// When force_zero_gamma is set the misclassification probabilities are pinned
// to zero regardless of nu (clean-data reduction hook).
double loglik_param(const ParamVector& theta, const Dataset& ds, LinkKind link,
                    ObjectiveDiagnostics* diag = nullptr, bool force_zero_gamma = false);
Eigen::VectorXd score_param(const ParamVector& theta, const Dataset& ds, LinkKind link,
                            bool force_zero_gamma = false);

// Semiparametric counterparts with plugged-in gamma estimates.
double loglik_semi(double beta0_star, const Eigen::VectorXd& beta, const Dataset& ds, LinkKind link,
                   const GammaValues& gam, ObjectiveDiagnostics* diag = nullptr);
Eigen::VectorXd score_semi(double beta0_star, const Eigen::VectorXd& beta, const Dataset& ds,
                           LinkKind link, const GammaValues& gam);

// Likelihood with the misclassification layer frozen: per-row surrogate
// coefficients a0, a1 are precomputed so path iterations cost one mat-vec.
// Rows are stored partitioned (validation block, then main-only block); all
// public outputs are sums or Gram matrices, so the order is internal.
struct PluggedLik {
  LinkKind link = LinkKind::logit;
  Eigen::MatrixXd zv;   // validation rows
  Eigen::MatrixXd zm;   // main-only rows
  Eigen::ArrayXd yv;    // true responses on the validation block
  Eigen::ArrayXd a0m, a1m;  // frozen surrogate coefficients, main block
  double v_const = 0.0;     // sum over V of y log a1 + (1-y) log a0

  int n() const { return static_cast<int>(zv.rows() + zm.rows()); }
  int p() const { return static_cast<int>(zv.cols()); }

  double loglik(double beta0_star, const Eigen::VectorXd& beta,
                ObjectiveDiagnostics* diag = nullptr) const;
  // d loglik / d (beta0*, beta); length 1+p.
  Eigen::VectorXd score(double beta0_star, const Eigen::VectorXd& beta) const;
  // d^2 loglik / d beta_bar_I^2 restricted to (intercept, support); (1+s)^2.
  Eigen::MatrixXd score_jacobian(double beta0_star, const Eigen::VectorXd& beta,
                                 const std::vector<int>& support) const;
  // per-row score contributions restricted to (intercept, support); n x (1+s),
  // validation block first.
  Eigen::MatrixXd per_row_scores(double beta0_star, const Eigen::VectorXd& beta,
                                 const std::vector<int>& support) const;

  // per-row weights q_i * w_i^2 for the penalized information matrix, in
  // block order (validation, then main).
  Eigen::ArrayXd info_weights(double beta0_star, const Eigen::VectorXd& beta) const;
};

PluggedLik make_plugged(const Dataset& ds, LinkKind link, const GammaValues& gam);

// Empirical information matrices: outer products of per-row scores over the
// validation / non-validation parts, combined as delta*I1 + (1-delta)*I2.
struct InfoMatrices {
  Eigen::MatrixXd i1;
  Eigen::MatrixXd i2;
  Eigen::MatrixXd i_delta;
};

InfoMatrices info_matrices(const ParamVector& theta, const Dataset& ds, LinkKind link,
                           const std::vector<int>& support, bool force_zero_gamma = false);

// Sample version of the plug-in covariance inflation term, averaged over the
// validation rows; dimensions (1+s) x (1+s).
Eigen::MatrixXd sigma_sp_hat(double beta0_star, const Eigen::VectorXd& beta,
                             const std::vector<int>& support, const Dataset& ds, LinkKind link,
                             const GammaValues& gam);

}  // namespace miscls
