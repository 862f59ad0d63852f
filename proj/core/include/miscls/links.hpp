#pragma once

#include <Eigen/Core>
#include <string>

namespace miscls {

enum class LinkKind { logit, probit, cloglog };

LinkKind link_from_string(const std::string& name);
std::string to_string(LinkKind link);

// Inverse link mu = g^{-1}(eta), its first derivative w = d mu / d eta,
// and second derivative d^2 mu / d eta^2.
double link_inverse(LinkKind link, double eta);
double link_inverse_deriv(LinkKind link, double eta);
double link_inverse_deriv2(LinkKind link, double eta);

// mu(z; beta_bar) = g^{-1}(beta0 + z'beta), clamped into [1e-10, 1 - 1e-10].
double mean_value(LinkKind link, double beta0_star, const Eigen::VectorXd& beta,
                  const Eigen::VectorXd& z);

// d mu / d beta_bar = (g^{-1})'(eta) * (1, z')'; unclamped.
Eigen::VectorXd mean_gradient(LinkKind link, double beta0_star, const Eigen::VectorXd& beta,
                              const Eigen::VectorXd& z);

}  // namespace miscls
