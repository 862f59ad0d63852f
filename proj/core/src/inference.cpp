#include "miscls/inference.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "miscls/mathutil.hpp"

namespace miscls {

namespace {

Eigen::MatrixXd invert_or_pinv(const Eigen::MatrixXd& m, bool& used_pinv) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (lu.isInvertible()) return lu.inverse();
  used_pinv = true;
  return m.completeOrthogonalDecomposition().pseudoInverse();
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

Eigen::VectorXd se_from(const Eigen::MatrixXd& cov) {
  return cov.diagonal().cwiseMax(0.0).cwiseSqrt();
}

Eigen::MatrixXd sigma_lambda(const FitResult& fit) {
  const int s = static_cast<int>(fit.support.size());
  Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(1 + s, 1 + s);
  for (int k = 0; k < s; ++k) {
    sig(1 + k, 1 + k) = penalty_eval(fit.penalty, std::fabs(fit.beta(fit.support[k]))).rho2;
  }
  return sig;
}

bool bias_present(const FitResult& fit) {
  for (int j : fit.support) {
    if (penalty_eval(fit.penalty, std::fabs(fit.beta(j))).rho1 != 0.0) return true;
  }
  return false;
}

}  // namespace

CovarianceEstimate cov_parametric(const FitResult& fit, const Dataset& ds, LinkKind link) {
  if (!fit.nu) throw std::invalid_argument("cov_parametric: fit carries no nu estimate");
  const int s = static_cast<int>(fit.support.size());
  const int m = 1 + s;
  const int q = fit.nu->q();
  const int n = ds.n();

  ParamVector theta{fit.beta0_star, fit.beta, fit.nu};
  const InfoMatrices im = info_matrices(theta, ds, link, fit.support);

  CovarianceEstimate out;
  out.method = "parametric-sandwich";

  const Eigen::MatrixXd i11 = im.i_delta.topLeftCorner(m, m);
  const Eigen::MatrixXd i12 = im.i_delta.topRightCorner(m, q);
  const Eigen::MatrixXd i22 = im.i_delta.bottomRightCorner(q, q);
  const Eigen::MatrixXd i22_inv = invert_or_pinv(i22, out.pseudo_inverse);
  const Eigen::MatrixXd i11_star = i11 - i12 * i22_inv * i12.transpose();

  const Eigen::MatrixXd sig = sigma_lambda(fit);
  const Eigen::MatrixXd bread_inv = invert_or_pinv(i11_star + sig, out.pseudo_inverse);
  const Eigen::MatrixXd cov_beta = (bread_inv * i11_star * bread_inv.transpose()) / n;

  // full (beta_bar_I, nu) sandwich for the nuisance block
  Eigen::MatrixXd sig_full = Eigen::MatrixXd::Zero(m + q, m + q);
  sig_full.topLeftCorner(m, m) = sig;
  const Eigen::MatrixXd a_inv = invert_or_pinv(im.i_delta + sig_full, out.pseudo_inverse);
  Eigen::MatrixXd cov_full = (a_inv * im.i_delta * a_inv.transpose()) / n;
  cov_full.topLeftCorner(m, m) = cov_beta;

  out.cov = symmetrize(cov_full);
  out.se = se_from(out.cov);
  out.bias_flag = bias_present(fit);
  return out;
}

CovarianceEstimate cov_semiparametric(const FitResult& fit, const Dataset& ds, LinkKind link,
                                      const GammaValues& gam) {
  const int s = static_cast<int>(fit.support.size());
  const int n = ds.n();
  const double delta = ds.delta();

  const PluggedLik pl = make_plugged(ds, link, gam);
  const Eigen::MatrixXd grad_score = pl.score_jacobian(fit.beta0_star, fit.beta, fit.support);
  const Eigen::MatrixXd bread = grad_score - n * sigma_lambda(fit);

  Eigen::MatrixXd rows = pl.per_row_scores(fit.beta0_star, fit.beta, fit.support);
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  rows.rowwise() -= mean;
  Eigen::MatrixXd meat = rows.transpose() * rows;
  if (delta < 1.0) {
    const Eigen::MatrixXd sig_sp =
        sigma_sp_hat(fit.beta0_star, fit.beta, fit.support, ds, link, gam);
    meat += n * (1.0 - delta) * (1.0 - delta) / (delta * delta) * sig_sp;
  }

  CovarianceEstimate out;
  out.method = "semiparametric-sandwich";
  const Eigen::MatrixXd bread_inv = invert_or_pinv(bread, out.pseudo_inverse);
  out.cov = symmetrize(bread_inv * meat * bread_inv.transpose());
  out.se = se_from(out.cov);
  out.bias_flag = bias_present(fit);
  (void)s;
  return out;
}

CovarianceEstimate cov_naive(const FitResult& fit, const Dataset& ds, LinkKind link) {
  const int n = ds.n();
  const PluggedLik pl = make_plugged_naive(ds, link);
  const Eigen::MatrixXd rows = pl.per_row_scores(fit.beta0_star, fit.beta, fit.support);
  const Eigen::MatrixXd info = (rows.transpose() * rows) / n;

  CovarianceEstimate out;
  out.method = "naive-sandwich";
  const Eigen::MatrixXd bread_inv = invert_or_pinv(info + sigma_lambda(fit), out.pseudo_inverse);
  out.cov = symmetrize((bread_inv * info * bread_inv.transpose()) / n);
  out.se = se_from(out.cov);
  out.bias_flag = bias_present(fit);
  return out;
}

std::vector<Interval> confidence_intervals(const CovarianceEstimate& cov, const FitResult& fit,
                                           double level) {
  if (!(level >= 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in [0,1)");
  }
  const double z = (level == 0.0) ? 0.0 : norm_quantile(0.5 * (1.0 + level));
  const int dim = static_cast<int>(cov.se.size());
  Eigen::VectorXd est(dim);
  est(0) = fit.beta0_star;
  const int s = static_cast<int>(fit.support.size());
  for (int k = 0; k < s; ++k) est(1 + k) = fit.beta(fit.support[k]);
  if (dim > 1 + s) {
    if (!fit.nu || dim != 1 + s + fit.nu->q()) {
      throw std::invalid_argument("confidence_intervals: covariance/fit dimension mismatch");
    }
    est.tail(fit.nu->q()) = fit.nu->flatten();
  }
  std::vector<Interval> out(dim);
  for (int i = 0; i < dim; ++i) {
    out[i] = Interval{est(i) - z * cov.se(i), est(i) + z * cov.se(i)};
  }
  return out;
}

}  // namespace miscls
