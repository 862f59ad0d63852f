#include "miscls/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "miscls/mathutil.hpp"
#include "miscls/parallel.hpp"
#include "miscls/rng.hpp"

namespace miscls {

int SimSetting::s_true() const {
  int s = 0;
  for (Eigen::Index j = 0; j < beta_true.size(); ++j) {
    if (beta_true(j) != 0.0) ++s;
  }
  return s;
}

SimSetting SimSetting::by_name(const std::string& name, int n) {
  SimSetting st;
  st.name = name;
  st.n = n;
  st.p = 20;
  st.beta_true = Eigen::VectorXd::Zero(st.p);
  st.beta_true(0) = 2.0;
  st.beta_true(1) = 1.3;
  st.beta_true(4) = 2.0;
  st.beta_true(5) = -1.5;
  st.beta_true(9) = 1.0;
  st.beta0_star_true = 1.0;
  st.alpha1 = Eigen::VectorXd::Zero(st.p);
  st.alpha1(0) = 1.0;
  st.alpha1(1) = 1.0;
  st.alpha1(2) = -1.5;
  st.alpha1(3) = 1.1;
  st.alpha1(4) = -1.3;
  if (name == "I") {
    st.eta = 0.0;
    st.alpha0 = -2.15;
  } else if (name == "II") {
    st.eta = 0.5;
    st.alpha0 = -2.15;
    st.varrho = 1.98;
  } else if (name == "III") {
    st.eta = 1.0;
    st.alpha0 = -2.15;
    st.varrho = 1.98;
  } else if (name == "IV") {
    st.eta = 0.0;
    st.alpha0 = -1.01;
  } else if (name == "V") {
    st.eta = 0.5;
    st.alpha0 = -1.01;
    st.varrho = 1.33;
  } else {
    throw std::invalid_argument("unknown simulation setting: " + name);
  }
  return st;
}

Eigen::MatrixXd generate_covariates(const SimSetting& st, int count, std::mt19937_64& rng) {
  const int p1 = st.p - 2;
  Eigen::MatrixXd z(count, st.p);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const double rho = 0.5;
  const double innovation = std::sqrt(1.0 - rho * rho);
  for (int i = 0; i < count; ++i) {
    double prev = gauss(rng);
    z(i, 0) = prev;
    for (int j = 1; j < p1; ++j) {
      prev = rho * prev + innovation * gauss(rng);
      z(i, j) = prev;
    }
    z(i, p1) = coin(rng) ? 1.0 : 0.0;
    z(i, p1 + 1) = coin(rng) ? 1.0 : 0.0;
  }
  return z;
}

namespace {

double misclass_probability(const SimSetting& st, const Eigen::VectorXd& zrow) {
  const double logistic_part = expit(st.alpha0 + st.alpha1.dot(zrow));
  if (st.eta == 0.0) return logistic_part;
  const double z2 = zrow(1);
  const double cdf_part = norm_cdf(z2 * z2 - st.varrho);
  return st.eta * cdf_part + (1.0 - st.eta) * logistic_part;
}

}  // namespace

Dataset generate_dataset(const SimSetting& st, std::uint64_t seed) {
  auto rng = make_stream(seed, 0);
  Dataset ds;
  ds.p1 = st.p - 2;
  ds.p2 = 2;
  ds.z = generate_covariates(st, st.n, rng);
  ds.y_star.resize(st.n);
  ds.y.resize(st.n);
  ds.in_validation.assign(st.n, 1);
  ds.validation_ids.resize(st.n);
  for (int j = 1; j <= st.p; ++j) ds.column_names.push_back("z" + std::to_string(j));

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < st.n; ++i) {
    ds.validation_ids[i] = i;
    const Eigen::VectorXd zrow = ds.z.row(i);
    const double mu = link_inverse(st.link, st.beta0_star_true + st.beta_true.dot(zrow));
    const int y = (unif(rng) < mu) ? 1 : 0;
    const double gamma = misclass_probability(st, zrow);
    const double p_star1 = (y == 1) ? (1.0 - gamma) : gamma;
    ds.y[i] = y;
    ds.y_star[i] = (unif(rng) < p_star1) ? 1 : 0;
  }
  ds.validate();
  return ds;
}

double misclassification_rate(const Dataset& ds) {
  int mismatches = 0;
  for (int i = 0; i < ds.n(); ++i) {
    if (ds.y[i] < 0) {
      throw std::invalid_argument("misclassification_rate requires y on every row");
    }
    if (ds.y[i] != ds.y_star[i]) ++mismatches;
  }
  return static_cast<double>(mismatches) / ds.n();
}

MetricsReport compute_metrics(const std::vector<ReplicationRecord>& records, const SimSetting& st,
                              const Eigen::MatrixXd& holdout_z) {
  MetricsReport rep;
  rep.rng_name = kRngDescription;
  rep.m_total = static_cast<int>(records.size());

  const int hold_n = static_cast<int>(holdout_z.rows());
  Eigen::VectorXd mu_true(hold_n);
  for (int i = 0; i < hold_n; ++i) {
    mu_true(i) =
        link_inverse(st.link, st.beta0_star_true + st.beta_true.dot(holdout_z.row(i)));
  }

  std::vector<int> nonzero, zero;
  for (int j = 0; j < st.p; ++j) {
    (st.beta_true(j) != 0.0 ? nonzero : zero).push_back(j);
  }

  double ame = 0.0, fnz = 0.0, fz = 0.0, amr = 0.0;
  std::vector<std::vector<double>> estimates(nonzero.size());
  std::vector<int> covered(nonzero.size(), 0);

  int used = 0;
  for (const auto& r : records) {
    if (!r.ok) continue;
    ++used;
    amr += r.mr;
    const Eigen::VectorXd eta = (holdout_z * r.beta).array() + r.beta0_star;
    double me = 0.0;
    for (int i = 0; i < hold_n; ++i) {
      const double d = mu_true(i) - link_inverse(st.link, eta(i));
      me += d * d;
    }
    me /= hold_n;
    ame += me;

    int false_nonzero = 0;
    for (int j : zero) {
      if (r.beta(j) != 0.0) ++false_nonzero;
    }
    int false_zero = 0;
    for (std::size_t k = 0; k < nonzero.size(); ++k) {
      const int j = nonzero[k];
      if (r.beta(j) == 0.0) ++false_zero;
      estimates[k].push_back(r.beta(j));
      if (r.beta(j) != 0.0 && r.se(j) > 0.0) {
        if (std::fabs(r.beta(j) - st.beta_true(j)) <= 1.96 * r.se(j)) ++covered[k];
      }
    }
    fnz += false_nonzero;
    fz += false_zero;
  }
  rep.m_used = used;
  rep.m_failed = rep.m_total - used;
  if (used == 0) return rep;

  rep.ame = ame / used;
  rep.false_nonzero = fnz / used;
  rep.false_zero = fz / used;
  rep.amr = amr / used;

  for (std::size_t k = 0; k < nonzero.size(); ++k) {
    CoefficientSummary cs;
    cs.index = nonzero[k];
    cs.truth = st.beta_true(nonzero[k]);
    const auto& est = estimates[k];
    double mean = 0.0, mse = 0.0;
    for (double e : est) {
      mean += e;
      mse += (e - cs.truth) * (e - cs.truth);
    }
    mean /= used;
    mse /= used;
    double var = 0.0;
    for (double e : est) var += (e - mean) * (e - mean);
    cs.bias = mean - cs.truth;
    cs.esd = (used > 1) ? std::sqrt(var / (used - 1)) : 0.0;
    cs.mse = mse;
    cs.cr = static_cast<double>(covered[k]) / used;
    rep.coefficients.push_back(cs);
  }
  return rep;
}

RunOutput run_replications(const SimSetting& st, const RunSpec& spec) {
  if (spec.replications < 1) throw std::invalid_argument("replications must be >= 1");
  RunOutput out;
  out.records.resize(spec.replications);

  parallel_for(spec.replications, spec.threads, [&](int j) {
    ReplicationRecord rec;
    rec.rep = j;
    rec.seed = spec.base_seed + static_cast<std::uint64_t>(j);
    try {
      const Dataset full = generate_dataset(st, rec.seed);
      rec.mr = misclassification_rate(full);
      const Dataset ds = make_validation_split(full, spec.delta, rec.seed);
      FitOptions opt = spec.options;
      opt.threads = 1;  // replication-level parallelism only
      const FitResult fit = miscls::fit(ds, spec.method, opt);
      rec.beta0_star = fit.beta0_star;
      rec.beta = fit.beta;
      rec.se = Eigen::VectorXd::Zero(st.p);
      for (std::size_t k = 0; k < fit.support.size(); ++k) {
        rec.se(fit.support[k]) = fit.se(1 + k);
      }
      rec.fit_converged = fit.diagnostics.converged;
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
      rec.beta = Eigen::VectorXd::Zero(st.p);
      rec.se = Eigen::VectorXd::Zero(st.p);
    }
    out.records[j] = std::move(rec);
  });

  auto holdout_rng = make_stream(spec.base_seed, 2);
  const Eigen::MatrixXd holdout = generate_covariates(st, spec.holdout_size, holdout_rng);
  out.report = compute_metrics(out.records, st, holdout);

  // model error per replication, recomputed here so records carry it too
  for (auto& r : out.records) {
    if (!r.ok) continue;
    const Eigen::VectorXd eta = (holdout * r.beta).array() + r.beta0_star;
    double me = 0.0;
    for (int i = 0; i < holdout.rows(); ++i) {
      const double mu_t =
          link_inverse(st.link, st.beta0_star_true + st.beta_true.dot(holdout.row(i)));
      const double d = mu_t - link_inverse(st.link, eta(i));
      me += d * d;
    }
    r.me = me / holdout.rows();
  }
  return out;
}

}  // namespace miscls
