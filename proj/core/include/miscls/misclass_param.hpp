#pragma once

#include <Eigen/Core>

namespace miscls {

// Nuisance parameters of the linear-logistic misclassification model
//   logit g01(z) = nu1 + nu2'z,  logit g10(z) = nu3 + nu4'z.
// Flattened layout: (nu1, nu2_1..nu2_p, nu3, nu4_1..nu4_p), q = 2(p+1).
struct NuVector {
  double nu1 = 0.0;
  Eigen::VectorXd nu2;
  double nu3 = 0.0;
  Eigen::VectorXd nu4;

  static NuVector zeros(int p);
  static NuVector from_flat(const Eigen::VectorXd& v);
  Eigen::VectorXd flatten() const;
  int q() const { return 2 * (static_cast<int>(nu2.size()) + 1); }
};

struct GammaPair {
  double g01 = 0.0;
  double g10 = 0.0;
  Eigen::VectorXd d01;  // d g01 / d nu (flattened), length q
  Eigen::VectorXd d10;  // d g10 / d nu
};

GammaPair gamma_param(const NuVector& nu, const Eigen::VectorXd& z);

// Surrogate-likelihood coefficients a_k(y*, z) = P(Y*=y* | Y=k, z) with
// derivatives chained through gamma_param.
struct ACoeffs {
  double a0 = 0.0;
  double a1 = 0.0;
  Eigen::VectorXd da0;
  Eigen::VectorXd da1;
};

ACoeffs a_coefficients(const NuVector& nu, int y_star, const Eigen::VectorXd& z);

}  // namespace miscls
