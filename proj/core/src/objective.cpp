#include "miscls/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "miscls/mathutil.hpp"

namespace miscls {

namespace {

// Only the lower end needs guarding: the argument is the probability of the
// observed outcome, so log stays finite for any v in (0, 1].
inline double safe_log(double v, ObjectiveDiagnostics* diag) {
  if (v < kProbClamp) {
    if (diag) ++diag->clamp_events;
    v = kProbClamp;
  }
  return std::log(v);
}

inline void a_from_gamma(double g01, double g10, int ystar, double& a0, double& a1) {
  if (ystar == 1) {
    a0 = g01;
    a1 = 1.0 - g10;
  } else {
    a0 = 1.0 - g01;
    a1 = g10;
  }
}

Eigen::VectorXd linear_predictor(const Dataset& ds, double beta0, const Eigen::VectorXd& beta) {
  return (ds.z * beta).array() + beta0;
}

}  // namespace

GammaValues gamma_values_zero(int n) {
  GammaValues g;
  g.g01 = Eigen::VectorXd::Zero(n);
  g.g10 = Eigen::VectorXd::Zero(n);
  return g;
}

GammaValues gamma_values_from_nu(const Dataset& ds, const NuVector& nu) {
  GammaValues g;
  const Eigen::VectorXd eta01 = (ds.z * nu.nu2).array() + nu.nu1;
  const Eigen::VectorXd eta10 = (ds.z * nu.nu4).array() + nu.nu3;
  g.g01.resize(ds.n());
  g.g10.resize(ds.n());
  for (int i = 0; i < ds.n(); ++i) {
    g.g01(i) = expit(eta01(i));
    g.g10(i) = expit(eta10(i));
  }
  return g;
}

double loglik_param(const ParamVector& theta, const Dataset& ds, LinkKind link,
                    ObjectiveDiagnostics* diag, bool force_zero_gamma) {
  if (!force_zero_gamma && !theta.nu) {
    throw std::invalid_argument("loglik_param: theta.nu is required");
  }
  const int n = ds.n();
  const Eigen::VectorXd eta = linear_predictor(ds, theta.beta0_star, theta.beta);
  Eigen::VectorXd eta01, eta10;
  if (!force_zero_gamma) {
    eta01 = (ds.z * theta.nu->nu2).array() + theta.nu->nu1;
    eta10 = (ds.z * theta.nu->nu4).array() + theta.nu->nu3;
  }
  double ll = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mu = link_inverse(link, eta(i));
    const double g01 = force_zero_gamma ? 0.0 : expit(eta01(i));
    const double g10 = force_zero_gamma ? 0.0 : expit(eta10(i));
    if (ds.in_validation[i]) {
      double a0, a1;
      a_from_gamma(g01, g10, ds.y_star[i], a0, a1);
      ll += (ds.y[i] == 1) ? safe_log(mu, diag) + safe_log(a1, diag)
                           : safe_log(1.0 - mu, diag) + safe_log(a0, diag);
    } else {
      const double mu_star = g01 + (1.0 - g01 - g10) * mu;
      ll += (ds.y_star[i] == 1) ? safe_log(mu_star, diag) : safe_log(1.0 - mu_star, diag);
    }
  }
  return ll;
}

Eigen::VectorXd score_param(const ParamVector& theta, const Dataset& ds, LinkKind link,
                            bool force_zero_gamma) {
  if (!force_zero_gamma && !theta.nu) {
    throw std::invalid_argument("score_param: theta.nu is required");
  }
  const int n = ds.n();
  const int p = ds.p();
  const Eigen::VectorXd eta = linear_predictor(ds, theta.beta0_star, theta.beta);
  Eigen::VectorXd eta01, eta10;
  if (!force_zero_gamma) {
    eta01 = (ds.z * theta.nu->nu2).array() + theta.nu->nu1;
    eta10 = (ds.z * theta.nu->nu4).array() + theta.nu->nu3;
  }
  Eigen::VectorXd cb(n), c01 = Eigen::VectorXd::Zero(n), c10 = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double mu_raw = link_inverse(link, eta(i));
    const double mu = clamp_prob(mu_raw);
    const double w = link_inverse_deriv(link, eta(i));
    const double g01 = force_zero_gamma ? 0.0 : expit(eta01(i));
    const double g10 = force_zero_gamma ? 0.0 : expit(eta10(i));
    double a0, a1;
    a_from_gamma(g01, g10, ds.y_star[i], a0, a1);
    if (ds.in_validation[i]) {
      cb(i) = (ds.y[i] - mu) * w / (mu * (1.0 - mu));
      if (!force_zero_gamma) {
        if (ds.y[i] == 1) {
          c10(i) = (ds.y_star[i] == 0 ? 1.0 : 0.0) - g10;
        } else {
          c01(i) = (ds.y_star[i] == 1 ? 1.0 : 0.0) - g01;
        }
      }
    } else {
      const double den = clamp_prob(a1 * mu_raw + a0 * (1.0 - mu_raw));
      cb(i) = (a1 - a0) * w / den;
      if (!force_zero_gamma) {
        const double s0 = (ds.y_star[i] == 1) ? 1.0 : -1.0;
        const double w01 = g01 * (1.0 - g01);
        const double w10 = g10 * (1.0 - g10);
        c01(i) = s0 * (1.0 - mu_raw) * w01 / den;
        c10(i) = -s0 * mu_raw * w10 / den;
      }
    }
  }
  const int q = theta.nu ? theta.nu->q() : 0;
  Eigen::VectorXd score(1 + p + q);
  score(0) = cb.sum();
  score.segment(1, p) = ds.z.transpose() * cb;
  if (q > 0) {
    score(1 + p) = c01.sum();
    score.segment(2 + p, p) = ds.z.transpose() * c01;
    score(2 + 2 * p) = c10.sum();
    score.segment(3 + 2 * p, p) = ds.z.transpose() * c10;
  }
  return score;
}

PluggedLik make_plugged(const Dataset& ds, LinkKind link, const GammaValues& gam) {
  const int n = ds.n();
  if (gam.g01.size() != n || gam.g10.size() != n) {
    throw std::invalid_argument("make_plugged: gamma values do not match the dataset");
  }
  PluggedLik pl;
  pl.link = link;
  const int nv = ds.n_validation();
  const int nm = n - nv;
  pl.zv.resize(nv, ds.p());
  pl.zm.resize(nm, ds.p());
  pl.yv.resize(nv);
  pl.a0m.resize(nm);
  pl.a1m.resize(nm);
  pl.v_const = 0.0;
  int iv = 0, im = 0;
  for (int i = 0; i < n; ++i) {
    double a0, a1;
    a_from_gamma(gam.g01(i), gam.g10(i), ds.y_star[i], a0, a1);
    if (ds.in_validation[i]) {
      pl.zv.row(iv) = ds.z.row(i);
      pl.yv(iv) = ds.y[i];
      pl.v_const += (ds.y[i] == 1) ? safe_log(a1, nullptr) : safe_log(a0, nullptr);
      ++iv;
    } else {
      pl.zm.row(im) = ds.z.row(i);
      pl.a0m(im) = a0;
      pl.a1m(im) = a1;
      ++im;
    }
  }
  return pl;
}

namespace {

const double kLogClamp = std::log(kProbClamp);

}  // namespace

double PluggedLik::loglik(double beta0_star, const Eigen::VectorXd& beta,
                          ObjectiveDiagnostics* diag) const {
  double ll = v_const;
  if (zv.rows() > 0) {
    const Eigen::ArrayXd eta = (zv * beta).array() + beta0_star;
    if (link == LinkKind::logit) {
      const Eigen::ArrayXd sp = softplus_vec(eta);
      const Eigen::ArrayXd log_mu = (eta - sp).cwiseMax(kLogClamp);
      const Eigen::ArrayXd log_1mu = (-sp).cwiseMax(kLogClamp);
      ll += (yv * log_mu + (1.0 - yv) * log_1mu).sum();
      if (diag) {
        diag->clamp_events += (yv * (eta - sp < kLogClamp).cast<double>() +
                               (1.0 - yv) * (-sp < kLogClamp).cast<double>())
                                  .sum();
      }
    } else {
      for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = link_inverse(link, eta(i));
        ll += (yv(i) == 1.0) ? safe_log(mu, diag) : safe_log(1.0 - mu, diag);
      }
    }
  }
  if (zm.rows() > 0) {
    const Eigen::ArrayXd eta = (zm * beta).array() + beta0_star;
    Eigen::ArrayXd mu(eta.size());
    if (link == LinkKind::logit) {
      mu = expit_vec(eta);
    } else {
      for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = link_inverse(link, eta(i));
    }
    // a0, a1 are already evaluated at the observed y*, so this is f(y*|z)
    const Eigen::ArrayXd den = a1m * mu + a0m * (1.0 - mu);
    ll += den.cwiseMax(kProbClamp).log().sum();
    if (diag) diag->clamp_events += (den < kProbClamp).count();
  }
  return ll;
}

Eigen::VectorXd PluggedLik::score(double beta0_star, const Eigen::VectorXd& beta) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(1 + p());
  if (zv.rows() > 0) {
    const Eigen::ArrayXd eta = (zv * beta).array() + beta0_star;
    Eigen::ArrayXd c(eta.size());
    if (link == LinkKind::logit) {
      c = yv - expit_vec(eta);
    } else {
      for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = clamp_prob(link_inverse(link, eta(i)));
        c(i) = (yv(i) - mu) * link_inverse_deriv(link, eta(i)) / (mu * (1.0 - mu));
      }
    }
    g(0) += c.sum();
    g.tail(p()).noalias() += zv.transpose() * c.matrix();
  }
  if (zm.rows() > 0) {
    const Eigen::ArrayXd eta = (zm * beta).array() + beta0_star;
    Eigen::ArrayXd c(eta.size());
    if (link == LinkKind::logit) {
      const Eigen::ArrayXd mu = expit_vec(eta);
      const Eigen::ArrayXd den = (a1m * mu + a0m * (1.0 - mu)).cwiseMax(kProbClamp);
      c = (a1m - a0m) * mu * (1.0 - mu) / den;
    } else {
      for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = link_inverse(link, eta(i));
        const double den = clamp_prob(a1m(i) * mu + a0m(i) * (1.0 - mu));
        c(i) = (a1m(i) - a0m(i)) * link_inverse_deriv(link, eta(i)) / den;
      }
    }
    g(0) += c.sum();
    g.tail(p()).noalias() += zm.transpose() * c.matrix();
  }
  return g;
}

namespace {

// Builds [1, z_support] design; support holds 0-based beta indices.
Eigen::MatrixXd design_support(const Eigen::MatrixXd& z, const std::vector<int>& support) {
  Eigen::MatrixXd x(z.rows(), 1 + support.size());
  x.col(0).setOnes();
  for (std::size_t k = 0; k < support.size(); ++k) x.col(1 + k) = z.col(support[k]);
  return x;
}

}  // namespace

Eigen::MatrixXd PluggedLik::score_jacobian(double beta0_star, const Eigen::VectorXd& beta,
                                           const std::vector<int>& support) const {
  const int s = static_cast<int>(support.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(1 + s, 1 + s);
  if (zv.rows() > 0) {
    const Eigen::ArrayXd eta = (zv * beta).array() + beta0_star;
    Eigen::ArrayXd r(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu_raw = link_inverse(link, eta(i));
      if (link == LinkKind::logit) {
        r(i) = -mu_raw * (1.0 - mu_raw);
      } else {
        const double w = link_inverse_deriv(link, eta(i));
        const double w2 = link_inverse_deriv2(link, eta(i));
        const double mu = clamp_prob(mu_raw);
        const double v = mu * (1.0 - mu);
        const double vp = w * (1.0 - 2.0 * mu);
        r(i) = -w * w / v + (yv(i) - mu) * (w2 * v - w * vp) / (v * v);
      }
    }
    const Eigen::MatrixXd x = design_support(zv, support);
    out.noalias() += x.transpose() * r.matrix().asDiagonal() * x;
  }
  if (zm.rows() > 0) {
    const Eigen::ArrayXd eta = (zm * beta).array() + beta0_star;
    Eigen::ArrayXd r(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu_raw = link_inverse(link, eta(i));
      const double w = link_inverse_deriv(link, eta(i));
      const double w2 = link_inverse_deriv2(link, eta(i));
      const double cdiff = a1m(i) - a0m(i);
      const double den = clamp_prob(a1m(i) * mu_raw + a0m(i) * (1.0 - mu_raw));
      // d/d eta [ cdiff*w / den ] with d den / d eta = cdiff*w
      r(i) = cdiff * (w2 * den - cdiff * w * w) / (den * den);
    }
    const Eigen::MatrixXd x = design_support(zm, support);
    out.noalias() += x.transpose() * r.matrix().asDiagonal() * x;
  }
  return out;
}

Eigen::MatrixXd PluggedLik::per_row_scores(double beta0_star, const Eigen::VectorXd& beta,
                                           const std::vector<int>& support) const {
  const int s = static_cast<int>(support.size());
  Eigen::MatrixXd rows(n(), 1 + s);
  if (zv.rows() > 0) {
    const Eigen::ArrayXd eta = (zv * beta).array() + beta0_star;
    Eigen::ArrayXd c(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu = clamp_prob(link_inverse(link, eta(i)));
      c(i) = (yv(i) - mu) * link_inverse_deriv(link, eta(i)) / (mu * (1.0 - mu));
    }
    rows.topRows(zv.rows()) = c.matrix().asDiagonal() * design_support(zv, support);
  }
  if (zm.rows() > 0) {
    const Eigen::ArrayXd eta = (zm * beta).array() + beta0_star;
    Eigen::ArrayXd c(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu_raw = link_inverse(link, eta(i));
      const double den = clamp_prob(a1m(i) * mu_raw + a0m(i) * (1.0 - mu_raw));
      c(i) = (a1m(i) - a0m(i)) * link_inverse_deriv(link, eta(i)) / den;
    }
    rows.bottomRows(zm.rows()) = c.matrix().asDiagonal() * design_support(zm, support);
  }
  return rows;
}

Eigen::ArrayXd PluggedLik::info_weights(double beta0_star, const Eigen::VectorXd& beta) const {
  Eigen::ArrayXd qw(n());
  if (zv.rows() > 0) {
    const Eigen::ArrayXd eta = (zv * beta).array() + beta0_star;
    if (link == LinkKind::logit) {
      // q w^2 = mu(1-mu) for the logit link
      const Eigen::ArrayXd mu = expit_vec(eta);
      qw.head(zv.rows()) = mu * (1.0 - mu);
    } else {
      for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = clamp_prob(link_inverse(link, eta(i)));
        const double w = link_inverse_deriv(link, eta(i));
        qw(i) = w * w / (mu * (1.0 - mu));
      }
    }
  }
  if (zm.rows() > 0) {
    const Eigen::ArrayXd eta = (zm * beta).array() + beta0_star;
    if (link == LinkKind::logit) {
      const Eigen::ArrayXd mu = expit_vec(eta);
      const Eigen::ArrayXd den =
          (a1m * mu + a0m * (1.0 - mu)).cwiseMax(kProbClamp).cwiseMin(1.0 - kProbClamp);
      const Eigen::ArrayXd w = mu * (1.0 - mu);
      qw.tail(zm.rows()) = (a1m - a0m).square() * w.square() / (den * (1.0 - den));
    } else {
      for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = link_inverse(link, eta(i));
        const double den = clamp_prob(a1m(i) * mu + a0m(i) * (1.0 - mu));
        const double w = link_inverse_deriv(link, eta(i));
        const double cdiff = a1m(i) - a0m(i);
        qw(zv.rows() + i) = cdiff * cdiff * w * w / (den * (1.0 - den));
      }
    }
  }
  return qw;
}

double loglik_semi(double beta0_star, const Eigen::VectorXd& beta, const Dataset& ds, LinkKind link,
                   const GammaValues& gam, ObjectiveDiagnostics* diag) {
  return make_plugged(ds, link, gam).loglik(beta0_star, beta, diag);
}

Eigen::VectorXd score_semi(double beta0_star, const Eigen::VectorXd& beta, const Dataset& ds,
                           LinkKind link, const GammaValues& gam) {
  return make_plugged(ds, link, gam).score(beta0_star, beta);
}

InfoMatrices info_matrices(const ParamVector& theta, const Dataset& ds, LinkKind link,
                           const std::vector<int>& support, bool force_zero_gamma) {
  const int n = ds.n();
  const int p = ds.p();
  const int s = static_cast<int>(support.size());
  const bool with_nu = theta.nu.has_value() && !force_zero_gamma;
  const int q = with_nu ? theta.nu->q() : 0;
  const int dim = 1 + s + q;

  const Eigen::VectorXd eta = linear_predictor(ds, theta.beta0_star, theta.beta);
  Eigen::VectorXd eta01, eta10;
  if (with_nu) {
    eta01 = (ds.z * theta.nu->nu2).array() + theta.nu->nu1;
    eta10 = (ds.z * theta.nu->nu4).array() + theta.nu->nu3;
  }

  Eigen::MatrixXd i1 = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd i2 = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd s_row(dim);
  int n_main = 0;
  for (int i = 0; i < n; ++i) {
    const double mu_raw = link_inverse(link, eta(i));
    const double mu = clamp_prob(mu_raw);
    const double w = link_inverse_deriv(link, eta(i));
    const double g01 = with_nu ? expit(eta01(i)) : 0.0;
    const double g10 = with_nu ? expit(eta10(i)) : 0.0;
    double a0, a1;
    a_from_gamma(g01, g10, ds.y_star[i], a0, a1);

    double cb, c01 = 0.0, c10 = 0.0;
    if (ds.in_validation[i]) {
      cb = (ds.y[i] - mu) * w / (mu * (1.0 - mu));
      if (with_nu) {
        if (ds.y[i] == 1) {
          c10 = (ds.y_star[i] == 0 ? 1.0 : 0.0) - g10;
        } else {
          c01 = (ds.y_star[i] == 1 ? 1.0 : 0.0) - g01;
        }
      }
    } else {
      const double den = clamp_prob(a1 * mu_raw + a0 * (1.0 - mu_raw));
      cb = (a1 - a0) * w / den;
      if (with_nu) {
        const double s0 = (ds.y_star[i] == 1) ? 1.0 : -1.0;
        c01 = s0 * (1.0 - mu_raw) * g01 * (1.0 - g01) / den;
        c10 = -s0 * mu_raw * g10 * (1.0 - g10) / den;
      }
    }
    s_row(0) = cb;
    for (int k = 0; k < s; ++k) s_row(1 + k) = cb * ds.z(i, support[k]);
    if (with_nu) {
      s_row(1 + s) = c01;
      for (int k = 0; k < p; ++k) s_row(2 + s + k) = c01 * ds.z(i, k);
      s_row(2 + s + p) = c10;
      for (int k = 0; k < p; ++k) s_row(3 + s + p + k) = c10 * ds.z(i, k);
    }
    if (ds.in_validation[i]) {
      i1.noalias() += s_row * s_row.transpose();
    } else {
      i2.noalias() += s_row * s_row.transpose();
      ++n_main;
    }
  }
  InfoMatrices out;
  const int nv = ds.n_validation();
  out.i1 = i1 / nv;
  out.i2 = (n_main > 0) ? Eigen::MatrixXd(i2 / n_main) : Eigen::MatrixXd::Zero(dim, dim);
  const double delta = ds.delta();
  out.i_delta = delta * out.i1 + (1.0 - delta) * out.i2;
  return out;
}

Eigen::MatrixXd sigma_sp_hat(double beta0_star, const Eigen::VectorXd& beta,
                             const std::vector<int>& support, const Dataset& ds, LinkKind link,
                             const GammaValues& gam) {
  const int s = static_cast<int>(support.size());
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(1 + s, 1 + s);
  Eigen::VectorXd b(1 + s);
  const Eigen::VectorXd eta = linear_predictor(ds, beta0_star, beta);
  for (int i : ds.validation_ids) {
    const double mu = link_inverse(link, eta(i));
    const double w = link_inverse_deriv(link, eta(i));
    const double g01 = gam.g01(i);
    const double g10 = gam.g10(i);
    const double mu_star = clamp_prob(g01 + (1.0 - g01 - g10) * mu);
    const double y = ds.y[i];
    const double ys = ds.y_star[i];
    const double bracket = y * (1.0 - ys - g10) - (1.0 - y) * (ys - g01);
    const double f = (1.0 - g10 - g01) / (mu_star * (1.0 - mu_star)) * bracket;
    b(0) = f * w;
    for (int k = 0; k < s; ++k) b(1 + k) = f * w * ds.z(i, support[k]);
    sigma.noalias() += b * b.transpose();
  }
  return sigma / ds.n_validation();
}

}  // namespace miscls
