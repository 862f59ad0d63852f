#include "miscls/misclass_param.hpp"

#include <stdexcept>

#include "miscls/mathutil.hpp"

namespace miscls {

NuVector NuVector::zeros(int p) {
  NuVector nu;
  nu.nu2 = Eigen::VectorXd::Zero(p);
  nu.nu4 = Eigen::VectorXd::Zero(p);
  return nu;
}

NuVector NuVector::from_flat(const Eigen::VectorXd& v) {
  if (v.size() < 2 || v.size() % 2 != 0) {
    throw std::invalid_argument("NuVector::from_flat: length must be 2(p+1)");
  }
  const int p = static_cast<int>(v.size()) / 2 - 1;
  NuVector nu;
  nu.nu1 = v(0);
  nu.nu2 = v.segment(1, p);
  nu.nu3 = v(p + 1);
  nu.nu4 = v.segment(p + 2, p);
  return nu;
}

Eigen::VectorXd NuVector::flatten() const {
  const int p = static_cast<int>(nu2.size());
  Eigen::VectorXd v(2 * (p + 1));
  v(0) = nu1;
  v.segment(1, p) = nu2;
  v(p + 1) = nu3;
  v.segment(p + 2, p) = nu4;
  return v;
}

GammaPair gamma_param(const NuVector& nu, const Eigen::VectorXd& z) {
  if (nu.nu2.size() != z.size() || nu.nu4.size() != z.size()) {
    throw std::invalid_argument("gamma_param: dimension mismatch");
  }
  const int p = static_cast<int>(z.size());
  const int q = 2 * (p + 1);
  GammaPair g;
  g.g01 = expit(nu.nu1 + nu.nu2.dot(z));
  g.g10 = expit(nu.nu3 + nu.nu4.dot(z));
  g.d01 = Eigen::VectorXd::Zero(q);
  g.d10 = Eigen::VectorXd::Zero(q);
  const double w01 = g.g01 * (1.0 - g.g01);
  const double w10 = g.g10 * (1.0 - g.g10);
  g.d01(0) = w01;
  g.d01.segment(1, p) = w01 * z;
  g.d10(p + 1) = w10;
  g.d10.segment(p + 2, p) = w10 * z;
  return g;
}

ACoeffs a_coefficients(const NuVector& nu, int y_star, const Eigen::VectorXd& z) {
  if (y_star != 0 && y_star != 1) {
    throw std::invalid_argument("a_coefficients: y_star must be 0 or 1");
  }
  const GammaPair g = gamma_param(nu, z);
  ACoeffs a;
  if (y_star == 1) {
    a.a0 = g.g01;
    a.da0 = g.d01;
    a.a1 = 1.0 - g.g10;
    a.da1 = -g.d10;
  } else {
    a.a0 = 1.0 - g.g01;
    a.da0 = -g.d01;
    a.a1 = g.g10;
    a.da1 = g.d10;
  }
  return a;
}

}  // namespace miscls
