#pragma once

#include <Eigen/Core>
#include <random>
#include <vector>

#include "miscls/dataset.hpp"
#include "miscls/links.hpp"
#include "miscls/mathutil.hpp"
#include "miscls/misclass_param.hpp"
#include "miscls/objective.hpp"

namespace testutil {

// Random main-study/validation dataset with logistic response and a
// linear-logistic misclassification layer.
inline miscls::Dataset random_dataset(int n, int p, std::mt19937_64& rng, double delta = 0.5,
                                      double beta_scale = 1.0, double gamma_intercept = -2.0,
                                      miscls::LinkKind link = miscls::LinkKind::logit) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  miscls::Dataset ds;
  ds.p1 = p;
  ds.p2 = 0;
  ds.z.resize(n, p);
  ds.y_star.resize(n);
  ds.y.resize(n);
  ds.in_validation.assign(n, 0);

  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) beta(j) = beta_scale * ((j % 2 == 0) ? 0.8 : -0.5);
  Eigen::VectorXd nu2 = Eigen::VectorXd::Constant(p, 0.3);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) ds.z(i, j) = gauss(rng);
    const Eigen::VectorXd zrow = ds.z.row(i);
    const double mu = miscls::link_inverse(link, 0.4 + beta.dot(zrow));
    const int y = unif(rng) < mu ? 1 : 0;
    const double g01 = miscls::expit(gamma_intercept + nu2.dot(zrow));
    const double g10 = miscls::expit(gamma_intercept - nu2.dot(zrow));
    const double p1 = (y == 1) ? 1.0 - g10 : g01;
    ds.y[i] = y;
    ds.y_star[i] = unif(rng) < p1 ? 1 : 0;
    const bool validated = i < static_cast<int>(delta * n);
    if (validated) {
      ds.in_validation[i] = 1;
      ds.validation_ids.push_back(i);
    } else {
      ds.y[i] = -1;
    }
  }
  ds.validate();
  return ds;
}

inline miscls::NuVector random_nu(int p, std::mt19937_64& rng, double scale = 0.3) {
  std::normal_distribution<double> gauss(0.0, scale);
  miscls::NuVector nu = miscls::NuVector::zeros(p);
  nu.nu1 = gauss(rng) - 1.0;
  nu.nu3 = gauss(rng) - 1.0;
  for (int j = 0; j < p; ++j) {
    nu.nu2(j) = gauss(rng);
    nu.nu4(j) = gauss(rng);
  }
  return nu;
}

inline miscls::ParamVector random_theta(int p, std::mt19937_64& rng, bool with_nu = true) {
  std::normal_distribution<double> gauss(0.0, 0.5);
  miscls::ParamVector theta;
  theta.beta0_star = gauss(rng);
  theta.beta.resize(p);
  for (int j = 0; j < p; ++j) theta.beta(j) = gauss(rng);
  if (with_nu) theta.nu = random_nu(p, rng);
  return theta;
}

// Central finite differences of f at x.
template <typename F>
Eigen::VectorXd central_diff(F&& f, const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return g;
}

inline bool rel_close(double a, double b, double tol, double floor = 1e-7) {
  const double scale = std::max({std::fabs(a), std::fabs(b), floor / tol});
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace testutil
