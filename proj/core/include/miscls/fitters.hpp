#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "miscls/dataset.hpp"
#include "miscls/links.hpp"
#include "miscls/misclass_kernel.hpp"
#include "miscls/misclass_param.hpp"
#include "miscls/objective.hpp"
#include "miscls/path.hpp"
#include "miscls/penalty.hpp"

namespace miscls {

enum class Criterion { gcv, bic };
enum class Method { naive, parametric, semiparametric };

Criterion criterion_from_string(const std::string& name);
Method method_from_string(const std::string& name);
std::string to_string(Criterion c);
std::string to_string(Method m);

struct FitOptions {
  LinkKind link = LinkKind::logit;
  PenaltyKind penalty = PenaltyKind::scad;
  double penalty_a = 0.0;  // 0 = default shape for the kind
  Criterion criterion = Criterion::gcv;
  PathConfig path;
  double outer_tol = 1e-6;
  int max_outer = 50;
  bool use_pca = false;
  double pca_variance_threshold = 0.90;
  std::optional<double> fixed_h;      // overrides the h grid
  std::optional<double> fixed_omega;  // overrides the omega grid
  bool force_zero_gamma = false;      // clean-data reduction hook
  bool standardize = false;           // z-score covariates before fitting
  int threads = 1;

  double shape() const { return penalty_a > 0.0 ? penalty_a : default_shape(penalty); }
};

struct TuneCandidate {
  double lambda = 0.0;
  double h = std::numeric_limits<double>::quiet_NaN();
  double omega = std::numeric_limits<double>::quiet_NaN();
  double df = 0.0;
  double deviance = 0.0;
  double gcv = 0.0;
  double bic = 0.0;
  int support_size = 0;
  bool excluded = false;
};

struct FitDiagnostics {
  int outer_iterations = 0;
  bool converged = true;
  long clamp_events = 0;
  long kernel_fallbacks = 0;
  long gamma_sum_clamps = 0;
  long gamma_sum_warn_rows = 0;  // parametric fit: rows with g01+g10 >= 1
  int excluded_candidates = 0;
  int skipped_grid_points = 0;  // all-fallback (h, omega) points
  bool cov_pseudo_inverse = false;
  bool penalty_bias_flag = false;  // rho'(|beta_j|) != 0 on the support
};

struct FitResult {
  Method method = Method::naive;
  LinkKind link = LinkKind::logit;
  PenaltySpec penalty;
  Criterion criterion = Criterion::gcv;
  double lambda = 0.0;
  std::optional<double> h;
  std::optional<double> omega;
  double beta0_star = 0.0;
  Eigen::VectorXd beta;           // length p, exact zeros off support
  std::optional<NuVector> nu;
  std::vector<int> support;       // 0-based indices of nonzero beta
  Eigen::MatrixXd covariance;     // over (beta0*, beta_support [, nu])
  Eigen::VectorXd se;             // sqrt(diag(covariance))
  std::vector<TuneCandidate> tuning_trace;
  FitDiagnostics diagnostics;
  std::vector<std::string> column_names;
  int n_rows = 0;
  double delta_ratio = 0.0;
};

FitResult fit_naive(const Dataset& ds, const FitOptions& opt);
FitResult fit_parametric(const Dataset& ds, const FitOptions& opt);
FitResult fit_semiparametric(const Dataset& ds, const FitOptions& opt);
FitResult fit(const Dataset& ds, Method method, const FitOptions& opt);

// trace{I11_hat (I11_hat + Sigma_lambda)^{-1}} with
// I11_hat = (1/n) sum_i q_i (d mu / d beta_bar_I)^{x2}.
double effective_df(const PluggedLik& pl, double beta0_star, const Eigen::VectorXd& beta,
                    const std::vector<int>& support, const PenaltySpec& pen,
                    bool* pseudo_inverse = nullptr);

// 2 * sum of binomial KL divergences between observed responses and fitted
// probabilities (y/mu on validation rows, y*/mu* elsewhere).
double deviance(const PluggedLik& pl, double beta0_star, const Eigen::VectorXd& beta);

double gcv_statistic(double dev, double df, int n);
double bic_statistic(double dev, double df, int n);

// argmin of the criterion over candidates; df >= n excluded; ties broken
// toward the larger lambda. Fills gcv/bic/excluded fields. Returns -1 when
// every candidate is excluded.
int select_model(std::vector<TuneCandidate>& candidates, int n, Criterion crit);

// max over the support of |(1/n) score_j - rho'(|beta_j|) sgn(beta_j)|; the
// stationarity residual of the penalized score equations.
double kkt_residual(const PluggedLik& pl, double beta0_star, const Eigen::VectorXd& beta,
                    const PenaltySpec& pen);

// Frozen likelihood view used by the naive method: every row contributes its
// surrogate response with gamma = 0 (no validation information).
PluggedLik make_plugged_naive(const Dataset& ds, LinkKind link);

std::vector<int> support_of(const Eigen::VectorXd& beta);

}  // namespace miscls
