#include "miscls/misclass_kernel.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "miscls/mathutil.hpp"

namespace miscls {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogDenFloor = std::log(1e-12);
constexpr double kSumCap = 1.0 - 1e-6;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

void check_config(const KernelConfig& cfg) {
  if (!(cfg.h > 0.0)) throw std::invalid_argument("kernel bandwidth h must be positive");
  if (!(cfg.omega >= 0.0 && cfg.omega <= 1.0)) {
    throw std::invalid_argument("kernel smoothing omega must lie in [0,1]");
  }
  if (!(cfg.pca_variance_threshold > 0.0 && cfg.pca_variance_threshold <= 1.0)) {
    throw std::invalid_argument("pca variance threshold must lie in (0,1]");
  }
}

struct GammaOut {
  double g01 = 0.0;
  double g10 = 0.0;
  int fallbacks = 0;
  bool clamped = false;
};

// Class-stratified Nadaraya-Watson ratio from log kernel weights; the shared
// max is factored out so only the absolute denominator check needs log_const.
template <typename LwFn>
GammaOut gamma_at_point(int n_v, LwFn&& lw, double log_const, const std::vector<int>& vy,
                        const std::vector<int>& vystar, double fb_g01, double fb_g10) {
  double m1 = kNegInf, m0 = kNegInf;
  for (int j = 0; j < n_v; ++j) {
    const double w = lw(j);
    if (vy[j] == 1) {
      if (w > m1) m1 = w;
    } else if (w > m0) {
      m0 = w;
    }
  }
  GammaOut out;
  double den1 = 0.0, num1 = 0.0, den0 = 0.0, num0 = 0.0;
  for (int j = 0; j < n_v; ++j) {
    const double w = lw(j);
    if (vy[j] == 1) {
      if (w == kNegInf) continue;
      const double e = std::exp(w - m1);
      den1 += e;
      if (vystar[j] == 0) num1 += e;
    } else {
      if (w == kNegInf) continue;
      const double e = std::exp(w - m0);
      den0 += e;
      if (vystar[j] == 1) num0 += e;
    }
  }
  if (m1 == kNegInf || log_const + m1 + std::log(den1) < kLogDenFloor) {
    out.g10 = fb_g10;
    ++out.fallbacks;
  } else {
    out.g10 = num1 / den1;
  }
  if (m0 == kNegInf || log_const + m0 + std::log(den0) < kLogDenFloor) {
    out.g01 = fb_g01;
    ++out.fallbacks;
  } else {
    out.g01 = num0 / den0;
  }
  const double s = out.g01 + out.g10;
  if (s >= 1.0) {
    const double scale = kSumCap / s;
    out.g01 *= scale;
    out.g10 *= scale;
    out.clamped = true;
  }
  return out;
}

void global_fallback_rates(const Dataset& ds, double& fb_g01, double& fb_g10) {
  double n1 = 0, n0 = 0, f10 = 0, f01 = 0;
  for (int i : ds.validation_ids) {
    if (ds.y[i] == 1) {
      n1 += 1;
      if (ds.y_star[i] == 0) f10 += 1;
    } else {
      n0 += 1;
      if (ds.y_star[i] == 1) f01 += 1;
    }
  }
  if (n1 == 0 || n0 == 0) {
    throw std::invalid_argument("validation sample must contain both response classes");
  }
  fb_g10 = f10 / n1;
  fb_g01 = f01 / n0;
}

Eigen::MatrixXd pairwise_sqdist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::VectorXd an = a.rowwise().squaredNorm();
  Eigen::VectorXd bn = b.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * a * b.transpose();
  d2.colwise() += an;
  d2.rowwise() += bn.transpose();
  return d2.cwiseMax(0.0);
}

}  // namespace

Eigen::MatrixXd PcaTransform::apply(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean.transpose()) * components;
}

PcaTransform fit_pca(const Eigen::MatrixXd& x, double variance_threshold) {
  PcaTransform t;
  t.mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - t.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double total = sv.squaredNorm();
  int k = 1;
  if (total > 0.0) {
    double cum = 0.0;
    for (k = 0; k < sv.size(); ++k) {
      cum += sv(k) * sv(k);
      if (cum >= variance_threshold * total) break;
    }
    k = std::min<int>(k + 1, static_cast<int>(sv.size()));
  }
  t.components = svd.matrixV().leftCols(k);
  return t;
}

double kernel_weight(const KernelConfig& cfg, const Eigen::VectorXd& z_i, const Eigen::VectorXd& z,
                     int p1, int p2) {
  check_config(cfg);
  if (z_i.size() != z.size() || z.size() != p1 + p2) {
    throw std::invalid_argument("kernel_weight: dimension mismatch");
  }
  double w = 1.0;
  if (p1 > 0) {
    double k = 1.0;
    for (int t = 0; t < p1; ++t) k *= norm_pdf((z_i(t) - z(t)) / cfg.h);
    w *= k * std::pow(cfg.h, -p1);
  }
  if (p2 > 0) {
    int d = 0;
    for (int t = 0; t < p2; ++t) {
      if (z_i(p1 + t) != z(p1 + t)) ++d;
    }
    w *= (d == 0) ? 1.0 : std::pow(cfg.omega, d);
  }
  return w;
}

GammaTable estimate_gammas(const Dataset& ds, const KernelConfig& cfg) {
  check_config(cfg);
  GammaTable t;
  t.h_ = cfg.h;
  t.omega_ = cfg.omega;
  t.p1_raw_ = ds.p1;
  t.p2_ = ds.p2;
  global_fallback_rates(ds, t.fallback_g01_, t.fallback_g10_);

  const int nv = ds.n_validation();
  Eigen::MatrixXd vcont(nv, ds.p1);
  t.vd_.resize(nv, ds.p2);
  t.vy_.resize(nv);
  t.vystar_.resize(nv);
  for (int k = 0; k < nv; ++k) {
    const int i = ds.validation_ids[k];
    vcont.row(k) = ds.z.row(i).head(ds.p1);
    t.vd_.row(k) = ds.z.row(i).tail(ds.p2);
    t.vy_[k] = ds.y[i];
    t.vystar_[k] = ds.y_star[i];
  }
  if (cfg.use_pca && ds.p1 > 0) {
    t.pca_ = fit_pca(vcont, cfg.pca_variance_threshold);
    t.vc_ = t.pca_->apply(vcont);
  } else {
    t.vc_ = std::move(vcont);
  }
  return t;
}

std::pair<double, double> GammaTable::evaluate(const Eigen::VectorXd& z) const {
  if (z.size() != p1_raw_ + p2_) throw std::invalid_argument("GammaTable::evaluate: bad z length");
  Eigen::VectorXd zc = z.head(p1_raw_);
  if (pca_) zc = pca_->apply(zc.transpose()).row(0);
  const Eigen::VectorXd zd = z.tail(p2_);
  const int nv = static_cast<int>(vy_.size());
  const int k = static_cast<int>(vc_.cols());
  const double inv2h2 = (k > 0) ? 1.0 / (2.0 * h_ * h_) : 0.0;
  const double log_omega = (omega_ > 0.0) ? std::log(omega_) : kNegInf;
  const double log_const = (k > 0) ? (-k * std::log(h_) - k * kHalfLog2Pi) : 0.0;

  auto lw = [&](int j) {
    double v = 0.0;
    if (k > 0) v -= (vc_.row(j).transpose() - zc).squaredNorm() * inv2h2;
    if (p2_ > 0) {
      int d = 0;
      for (int u = 0; u < p2_; ++u) {
        if (vd_(j, u) != zd(u)) ++d;
      }
      if (d > 0) {
        if (omega_ == 0.0) return kNegInf;
        v += d * log_omega;
      }
    }
    return v;
  };
  const GammaOut out = gamma_at_point(nv, lw, log_const, vy_, vystar_, fallback_g01_, fallback_g10_);
  return {out.g01, out.g10};
}

GammaValues GammaTable::evaluate_rows(const Eigen::MatrixXd& z) const {
  const int n = static_cast<int>(z.rows());
  GammaValues vals;
  vals.g01.resize(n);
  vals.g10.resize(n);
  long rows_with_fallback = 0;
  for (int i = 0; i < n; ++i) {
    // per-row path shares the single-point evaluator
    Eigen::VectorXd zi = z.row(i);
    Eigen::VectorXd zc = zi.head(p1_raw_);
    if (pca_) zc = pca_->apply(zc.transpose()).row(0);
    const Eigen::VectorXd zd = zi.tail(p2_);
    const int nv = static_cast<int>(vy_.size());
    const int k = static_cast<int>(vc_.cols());
    const double inv2h2 = (k > 0) ? 1.0 / (2.0 * h_ * h_) : 0.0;
    const double log_omega = (omega_ > 0.0) ? std::log(omega_) : kNegInf;
    const double log_const = (k > 0) ? (-k * std::log(h_) - k * kHalfLog2Pi) : 0.0;
    auto lw = [&](int j) {
      double v = 0.0;
      if (k > 0) v -= (vc_.row(j).transpose() - zc).squaredNorm() * inv2h2;
      if (p2_ > 0) {
        int d = 0;
        for (int u = 0; u < p2_; ++u) {
          if (vd_(j, u) != zd(u)) ++d;
        }
        if (d > 0) {
          if (omega_ == 0.0) return kNegInf;
          v += d * log_omega;
        }
      }
      return v;
    };
    const GammaOut out =
        gamma_at_point(nv, lw, log_const, vy_, vystar_, fallback_g01_, fallback_g10_);
    vals.g01(i) = out.g01;
    vals.g10(i) = out.g10;
    vals.fallback_count += out.fallbacks;
    vals.sum_clamp_count += out.clamped ? 1 : 0;
    if (out.fallbacks > 0) ++rows_with_fallback;
  }
  vals.all_fallback = (rows_with_fallback == n);
  return vals;
}

std::pair<std::vector<double>, std::vector<double>> smoothing_grids(int n_v, int p1_eff) {
  if (n_v < 2) throw std::invalid_argument("smoothing_grids: n_v must be at least 2");
  const double hb = std::pow(n_v, -1.0 / (4.0 + p1_eff));
  const double wb = std::pow(n_v, -2.0 / (4.0 + p1_eff));
  std::vector<double> hs(10), ws(5);
  for (int i = 0; i < 10; ++i) hs[i] = (0.5 + 1.5 * i / 9.0) * hb;
  for (int i = 0; i < 5; ++i) ws[i] = std::min(1.0, (0.5 + 1.5 * i / 4.0) * wb);
  return {hs, ws};
}

KernelGridEvaluator::KernelGridEvaluator(const Dataset& ds, bool use_pca,
                                         double pca_variance_threshold) {
  n_ = ds.n();
  p2_ = ds.p2;
  global_fallback_rates(ds, fallback_g01_, fallback_g10_);

  const int nv = ds.n_validation();
  vy_.resize(nv);
  vystar_.resize(nv);
  Eigen::MatrixXd vcont(nv, ds.p1);
  Eigen::MatrixXd vdisc(nv, ds.p2);
  for (int k = 0; k < nv; ++k) {
    const int i = ds.validation_ids[k];
    vcont.row(k) = ds.z.row(i).head(ds.p1);
    vdisc.row(k) = ds.z.row(i).tail(ds.p2);
    vy_[k] = ds.y[i];
    vystar_[k] = ds.y_star[i];
  }

  Eigen::MatrixXd qcont = ds.z.leftCols(ds.p1);
  if (use_pca && ds.p1 > 0) {
    pca_ = fit_pca(vcont, pca_variance_threshold);
    vcont = pca_->apply(vcont);
    qcont = pca_->apply(qcont);
  }
  p1_eff_ = static_cast<int>(vcont.cols());
  if (p1_eff_ > 0) d2_ = pairwise_sqdist(qcont, vcont);

  if (ds.p2 > 0) {
    mism_.resize(n_, nv);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < nv; ++j) {
        int d = 0;
        for (int u = 0; u < ds.p2; ++u) {
          if (ds.z(i, ds.p1 + u) != vdisc(j, u)) ++d;
        }
        mism_(i, j) = d;
      }
    }
  }
}

GammaValues KernelGridEvaluator::evaluate(double h, double omega) const {
  if (!(h > 0.0) || !(omega >= 0.0 && omega <= 1.0)) {
    throw std::invalid_argument("KernelGridEvaluator: invalid (h, omega)");
  }
  const int nv = static_cast<int>(vy_.size());
  const double inv2h2 = 1.0 / (2.0 * h * h);
  const double log_omega = (omega > 0.0) ? std::log(omega) : kNegInf;
  const double log_const = (p1_eff_ > 0) ? (-p1_eff_ * std::log(h) - p1_eff_ * kHalfLog2Pi) : 0.0;

  GammaValues vals;
  vals.g01.resize(n_);
  vals.g10.resize(n_);
  long rows_with_fallback = 0;
  for (int i = 0; i < n_; ++i) {
    auto lw = [&](int j) {
      double v = 0.0;
      if (p1_eff_ > 0) v -= d2_(i, j) * inv2h2;
      if (p2_ > 0) {
        const int d = mism_(i, j);
        if (d > 0) {
          if (omega == 0.0) return kNegInf;
          v += d * log_omega;
        }
      }
      return v;
    };
    const GammaOut out =
        gamma_at_point(nv, lw, log_const, vy_, vystar_, fallback_g01_, fallback_g10_);
    vals.g01(i) = out.g01;
    vals.g10(i) = out.g10;
    vals.fallback_count += out.fallbacks;
    vals.sum_clamp_count += out.clamped ? 1 : 0;
    if (out.fallbacks > 0) ++rows_with_fallback;
  }
  vals.all_fallback = (rows_with_fallback == n_);
  return vals;
}

}  // namespace miscls
