#include "miscls/links.hpp"

#include <cmath>
#include <stdexcept>

#include "miscls/mathutil.hpp"

namespace miscls {

LinkKind link_from_string(const std::string& name) {
  if (name == "logit") return LinkKind::logit;
  if (name == "probit") return LinkKind::probit;
  if (name == "cloglog") return LinkKind::cloglog;
  throw std::invalid_argument("unknown link: " + name);
}

std::string to_string(LinkKind link) {
  switch (link) {
    case LinkKind::logit: return "logit";
    case LinkKind::probit: return "probit";
    case LinkKind::cloglog: return "cloglog";
  }
  return "logit";
}

double link_inverse(LinkKind link, double eta) {
  switch (link) {
    case LinkKind::logit: return expit(eta);
    case LinkKind::probit: return norm_cdf(eta);
    case LinkKind::cloglog: return -std::expm1(-std::exp(eta));
  }
  return 0.5;
}

double link_inverse_deriv(LinkKind link, double eta) {
  switch (link) {
    case LinkKind::logit: {
      const double m = expit(eta);
      return m * (1.0 - m);
    }
    case LinkKind::probit: return norm_pdf(eta);
    case LinkKind::cloglog: return std::exp(eta - std::exp(eta));
  }
  return 0.0;
}

double link_inverse_deriv2(LinkKind link, double eta) {
  switch (link) {
    case LinkKind::logit: {
      const double m = expit(eta);
      return m * (1.0 - m) * (1.0 - 2.0 * m);
    }
    case LinkKind::probit: return -eta * norm_pdf(eta);
    case LinkKind::cloglog: {
      const double e = std::exp(eta);
      return std::exp(eta - e) * (1.0 - e);
    }
  }
  return 0.0;
}

double mean_value(LinkKind link, double beta0_star, const Eigen::VectorXd& beta,
                  const Eigen::VectorXd& z) {
  if (beta.size() != z.size()) {
    throw std::invalid_argument("mean_value: coefficient/covariate dimension mismatch");
  }
  const double eta = beta0_star + beta.dot(z);
  return clamp_prob(link_inverse(link, eta));
}

Eigen::VectorXd mean_gradient(LinkKind link, double beta0_star, const Eigen::VectorXd& beta,
                              const Eigen::VectorXd& z) {
  if (beta.size() != z.size()) {
    throw std::invalid_argument("mean_gradient: coefficient/covariate dimension mismatch");
  }
  const double eta = beta0_star + beta.dot(z);
  const double w = link_inverse_deriv(link, eta);
  Eigen::VectorXd g(1 + z.size());
  g(0) = w;
  g.tail(z.size()) = w * z;
  return g;
}

}  // namespace miscls
