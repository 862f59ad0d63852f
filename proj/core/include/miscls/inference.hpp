#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "miscls/fitters.hpp"

namespace miscls {

struct CovarianceEstimate {
  Eigen::MatrixXd cov;  // (1+s [, +q]) square, symmetric
  Eigen::VectorXd se;
  std::string method;
  bool pseudo_inverse = false;
  bool bias_flag = false;  // some selected coefficient sits where rho' != 0
};

// Sandwich covariance of (beta_bar_I, nu) for the parametric fit; the leading
// (1+s) block follows the profiled-information form
// (1/n) (I11* + Sigma_lambda)^{-1} I11* (I11* + Sigma_lambda)^{-T}.
CovarianceEstimate cov_parametric(const FitResult& fit, const Dataset& ds, LinkKind link);

// Plug-in sandwich for the semiparametric fit:
// {grad S* - n Sigma_lambda}^{-1} [cov{S*} + n (1-delta)^2/delta^2 Sigma_sp]
// {grad S* - n Sigma_lambda}^{-T}.
CovarianceEstimate cov_semiparametric(const FitResult& fit, const Dataset& ds, LinkKind link,
                                      const GammaValues& gam);

// Misspecified sandwich of the naive fit (gamma = 0, all rows surrogate).
CovarianceEstimate cov_naive(const FitResult& fit, const Dataset& ds, LinkKind link);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wald intervals beta_j +/- z_{(1+level)/2} SE_j over the covariance
// coordinates (intercept first, then the support; nu entries for the
// parametric method). Coordinates off the support carry no interval.
std::vector<Interval> confidence_intervals(const CovarianceEstimate& cov, const FitResult& fit,
                                           double level = 0.95);

}  // namespace miscls
