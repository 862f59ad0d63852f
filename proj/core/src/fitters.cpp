#include "miscls/fitters.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "miscls/inference.hpp"
#include "miscls/mathutil.hpp"
#include "miscls/optim.hpp"
#include "miscls/parallel.hpp"

namespace miscls {

Criterion criterion_from_string(const std::string& name) {
  if (name == "gcv") return Criterion::gcv;
  if (name == "bic") return Criterion::bic;
  throw std::invalid_argument("unknown criterion: " + name);
}

Method method_from_string(const std::string& name) {
  if (name == "naive") return Method::naive;
  if (name == "parametric") return Method::parametric;
  if (name == "semiparametric") return Method::semiparametric;
  throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(Criterion c) { return c == Criterion::gcv ? "gcv" : "bic"; }

std::string to_string(Method m) {
  switch (m) {
    case Method::naive: return "naive";
    case Method::parametric: return "parametric";
    case Method::semiparametric: return "semiparametric";
  }
  return "naive";
}

std::vector<int> support_of(const Eigen::VectorXd& beta) {
  std::vector<int> s;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) s.push_back(static_cast<int>(j));
  }
  return s;
}

PluggedLik make_plugged_naive(const Dataset& ds, LinkKind link) {
  const int n = ds.n();
  PluggedLik pl;
  pl.link = link;
  pl.zv.resize(0, ds.p());
  pl.yv.resize(0);
  pl.zm = ds.z;
  pl.a0m.resize(n);
  pl.a1m.resize(n);
  for (int i = 0; i < n; ++i) {
    pl.a0m(i) = (ds.y_star[i] == 1) ? 0.0 : 1.0;
    pl.a1m(i) = (ds.y_star[i] == 1) ? 1.0 : 0.0;
  }
  pl.v_const = 0.0;
  return pl;
}

double effective_df(const PluggedLik& pl, double beta0_star, const Eigen::VectorXd& beta,
                    const std::vector<int>& support, const PenaltySpec& pen,
                    bool* pseudo_inverse) {
  const int n = pl.n();
  const int nv = static_cast<int>(pl.zv.rows());
  const int s = static_cast<int>(support.size());
  const Eigen::ArrayXd qw = pl.info_weights(beta0_star, beta);
  Eigen::MatrixXd i11 = Eigen::MatrixXd::Zero(1 + s, 1 + s);
  if (nv > 0) {
    Eigen::MatrixXd x(nv, 1 + s);
    x.col(0).setOnes();
    for (int k = 0; k < s; ++k) x.col(1 + k) = pl.zv.col(support[k]);
    i11.noalias() += x.transpose() * qw.head(nv).matrix().asDiagonal() * x;
  }
  if (pl.zm.rows() > 0) {
    Eigen::MatrixXd x(pl.zm.rows(), 1 + s);
    x.col(0).setOnes();
    for (int k = 0; k < s; ++k) x.col(1 + k) = pl.zm.col(support[k]);
    i11.noalias() += x.transpose() * qw.tail(pl.zm.rows()).matrix().asDiagonal() * x;
  }
  i11 /= n;

  Eigen::MatrixXd m = i11;
  for (int k = 0; k < s; ++k) {
    m(1 + k, 1 + k) += penalty_eval(pen, std::fabs(beta(support[k]))).rho2;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  Eigen::MatrixXd sol;
  if (lu.isInvertible()) {
    sol = lu.solve(i11);
  } else {
    if (pseudo_inverse) *pseudo_inverse = true;
    sol = m.completeOrthogonalDecomposition().pseudoInverse() * i11;
  }
  return sol.trace();
}

double deviance(const PluggedLik& pl, double beta0_star, const Eigen::VectorXd& beta) {
  return -2.0 * (pl.loglik(beta0_star, beta, nullptr) - pl.v_const);
}

double gcv_statistic(double dev, double df, int n) {
  const double r = 1.0 - df / n;
  return dev / (n * r * r);
}

double bic_statistic(double dev, double df, int n) { return dev + 2.0 * std::log(n) * df; }

int select_model(std::vector<TuneCandidate>& candidates, int n, Criterion crit) {
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  double best_lambda = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    TuneCandidate& c = candidates[i];
    c.bic = bic_statistic(c.deviance, c.df, n);
    if (c.df >= n) {
      c.excluded = true;
      c.gcv = std::numeric_limits<double>::infinity();
      continue;
    }
    c.gcv = gcv_statistic(c.deviance, c.df, n);
    const double value = (crit == Criterion::gcv) ? c.gcv : c.bic;
    if (value < best_value || (value == best_value && c.lambda > best_lambda)) {
      best_value = value;
      best_lambda = c.lambda;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double kkt_residual(const PluggedLik& pl, double beta0_star, const Eigen::VectorXd& beta,
                    const PenaltySpec& pen) {
  const Eigen::VectorXd score = pl.score(beta0_star, beta);
  const int n = pl.n();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) == 0.0) continue;
    const double sgn = (beta(j) > 0.0) ? 1.0 : -1.0;
    const double resid =
        std::fabs(score(1 + j) / n - penalty_eval(pen, std::fabs(beta(j))).rho1 * sgn);
    worst = std::max(worst, resid);
  }
  return worst;
}

namespace {

double initial_intercept(const Dataset& ds, LinkKind link) {
  double m = 0.0;
  for (int i = 0; i < ds.n(); ++i) m += ds.y_star[i];
  m /= ds.n();
  m = std::min(std::max(m, 1e-6), 1.0 - 1e-6);
  switch (link) {
    case LinkKind::logit: return std::log(m / (1.0 - m));
    case LinkKind::probit: return norm_quantile(m);
    case LinkKind::cloglog: return std::log(-std::log(1.0 - m));
  }
  return 0.0;
}

// Smooth part over x = (beta0*, beta): mean negative log-likelihood plus the
// concave penalty component on the beta block.
SmoothProblem smooth_over_beta_bar(const PluggedLik* pl, PenaltySpec pen) {
  const int p = pl->p();
  const double n = pl->n();
  SmoothProblem sp;
  sp.value = [pl, pen, p, n](const Eigen::VectorXd& x) {
    return -pl->loglik(x(0), x.tail(p)) / n + concave_part_value(pen, x.tail(p));
  };
  sp.gradient = [pl, pen, p, n](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = -pl->score(x(0), x.tail(p)) / n;
    g.tail(p) += concave_part_gradient(pen, x.tail(p));
    return g;
  };
  return sp;
}

// Smooth part over beta only, intercept held fixed (parametric alternation).
SmoothProblem smooth_over_beta(const PluggedLik* pl, double beta0_fixed, PenaltySpec pen) {
  const int p = pl->p();
  const double n = pl->n();
  SmoothProblem sp;
  sp.value = [pl, pen, beta0_fixed, n](const Eigen::VectorXd& b) {
    return -pl->loglik(beta0_fixed, b) / n + concave_part_value(pen, b);
  };
  sp.gradient = [pl, pen, beta0_fixed, p, n](const Eigen::VectorXd& b) {
    Eigen::VectorXd g = -pl->score(beta0_fixed, b).tail(p) / n;
    g += concave_part_gradient(pen, b);
    return g;
  };
  return sp;
}

struct PathCandidate {
  TuneCandidate tc;
  double beta0 = 0.0;
  Eigen::VectorXd beta;
  int grid_index = -1;
};

// Runs the APF path over (beta0*, beta) with an unpenalized intercept and
// builds one tuning candidate per lambda.
std::vector<PathCandidate> path_over_beta_bar(const PluggedLik& pl, const PenaltySpec& pen_base,
                                              const PathConfig& cfg, double beta0_init,
                                              double h_tag, double omega_tag) {
  const int p = pl.p();
  const int n = pl.n();
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1 + p);
  x0(0) = beta0_init;
  // lambda_0 is the sup-norm of the raw (summed) score at beta = 0; the grid
  // lives on that axis and is rescaled by 1/n into the penalty's lambda,
  // which is what multiplies n*rho_lambda in the objective
  const Eigen::VectorXd g0 = -pl.score(beta0_init, Eigen::VectorXd::Zero(p)).tail(p);
  std::vector<double> grid = lambda_grid(g0, n, p, cfg);
  for (double& lam : grid) lam /= n;
  std::vector<char> mask(1 + p, 1);
  mask[0] = 0;
  auto family = [&pl, &pen_base](double lam) {
    return smooth_over_beta_bar(&pl, pen_base.with_lambda(lam));
  };
  const PathResult path = apf_path(family, grid, x0, mask, cfg);

  std::vector<PathCandidate> out;
  out.reserve(path.entries.size());
  for (const auto& e : path.entries) {
    PathCandidate c;
    c.beta0 = e.beta(0);
    c.beta = e.beta.tail(p);
    c.tc.lambda = e.lambda;
    c.tc.h = h_tag;
    c.tc.omega = omega_tag;
    const auto supp = support_of(c.beta);
    c.tc.support_size = static_cast<int>(supp.size());
    c.tc.df = effective_df(pl, c.beta0, c.beta, supp, pen_base.with_lambda(e.lambda));
    c.tc.deviance = deviance(pl, c.beta0, c.beta);
    out.push_back(std::move(c));
  }
  return out;
}

void attach_covariance(FitResult& fit, const CovarianceEstimate& cov) {
  fit.covariance = cov.cov;
  fit.se = cov.se;
  fit.diagnostics.cov_pseudo_inverse = cov.pseudo_inverse;
  fit.diagnostics.penalty_bias_flag = cov.bias_flag;
}

FitResult base_result(const Dataset& ds, Method method, const FitOptions& opt) {
  FitResult fit;
  fit.method = method;
  fit.link = opt.link;
  fit.criterion = opt.criterion;
  fit.column_names = ds.column_names;
  if (fit.column_names.empty()) {
    for (int j = 1; j <= ds.p(); ++j) fit.column_names.push_back("z" + std::to_string(j));
  }
  fit.n_rows = ds.n();
  fit.delta_ratio = ds.delta();
  return fit;
}

FitResult fit_naive_impl(const Dataset& ds, const FitOptions& opt) {
  ds.validate();
  const PenaltySpec pen_base(opt.penalty, 0.0, opt.shape());
  const PluggedLik pl = make_plugged_naive(ds, opt.link);
  const double beta0_init = initial_intercept(ds, opt.link);

  auto cands = path_over_beta_bar(pl, pen_base, opt.path, beta0_init,
                                  std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::quiet_NaN());
  std::vector<TuneCandidate> trace;
  trace.reserve(cands.size());
  for (auto& c : cands) trace.push_back(c.tc);
  const int sel = select_model(trace, ds.n(), opt.criterion);
  if (sel < 0) throw std::runtime_error("fit_naive: every tuning candidate was excluded");

  FitResult fit = base_result(ds, Method::naive, opt);
  fit.lambda = trace[sel].lambda;
  fit.penalty = pen_base.with_lambda(fit.lambda);
  fit.beta0_star = cands[sel].beta0;
  fit.beta = cands[sel].beta;
  fit.support = support_of(fit.beta);
  fit.tuning_trace = std::move(trace);
  fit.diagnostics.excluded_candidates =
      static_cast<int>(std::count_if(fit.tuning_trace.begin(), fit.tuning_trace.end(),
                                     [](const TuneCandidate& c) { return c.excluded; }));
  ObjectiveDiagnostics od;
  pl.loglik(fit.beta0_star, fit.beta, &od);
  fit.diagnostics.clamp_events = od.clamp_events;
  attach_covariance(fit, cov_naive(fit, ds, opt.link));
  return fit;
}

FitResult fit_parametric_impl(const Dataset& ds, const FitOptions& opt) {
  ds.validate();
  const int p = ds.p();
  const int n = ds.n();
  const PenaltySpec pen_base(opt.penalty, 0.0, opt.shape());
  const bool with_nu = !opt.force_zero_gamma;

  double beta0 = initial_intercept(ds, opt.link);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  NuVector nu = NuVector::zeros(p);
  const int q = with_nu ? nu.q() : 0;

  FitResult fit = base_result(ds, Method::parametric, opt);
  std::vector<TuneCandidate> trace;
  double lambda_sel = 0.0;
  bool converged = false;
  int outer = 0;

  for (outer = 1; outer <= opt.max_outer; ++outer) {
    Eigen::VectorXd prev(1 + p + q);
    prev(0) = beta0;
    prev.segment(1, p) = beta;
    if (with_nu) prev.tail(q) = nu.flatten();

    // (a) smooth block: maximize the observed likelihood over (beta0*, nu)
    {
      SmoothProblem sp;
      const Eigen::VectorXd beta_fixed = beta;
      sp.value = [&, beta_fixed](const Eigen::VectorXd& x) {
        ParamVector theta{x(0), beta_fixed,
                          with_nu ? std::optional<NuVector>(NuVector::from_flat(x.tail(q)))
                                  : std::nullopt};
        return -loglik_param(theta, ds, opt.link, nullptr, opt.force_zero_gamma) / n;
      };
      sp.gradient = [&, beta_fixed](const Eigen::VectorXd& x) {
        ParamVector theta{x(0), beta_fixed,
                          with_nu ? std::optional<NuVector>(NuVector::from_flat(x.tail(q)))
                                  : std::nullopt};
        const Eigen::VectorXd s = score_param(theta, ds, opt.link, opt.force_zero_gamma);
        Eigen::VectorXd g(1 + q);
        g(0) = -s(0) / n;
        if (with_nu) g.tail(q) = -s.segment(1 + p, q) / n;
        return g;
      };
      Eigen::VectorXd x0(1 + q);
      x0(0) = beta0;
      if (with_nu) x0.tail(q) = nu.flatten();
      LbfgsResult res;
      try {
        res = lbfgs_minimize(sp, x0);
      } catch (const std::exception& e) {
        throw std::runtime_error("fit_parametric: smooth subproblem failed at outer iteration " +
                                 std::to_string(outer) + ": " + e.what());
      }
      beta0 = res.x(0);
      if (with_nu) nu = NuVector::from_flat(res.x.tail(q));
    }

    // (b) path block: penalized beta at fixed (beta0*, nu)
    const GammaValues gv =
        with_nu ? gamma_values_from_nu(ds, nu) : gamma_values_zero(n);
    const PluggedLik pl = make_plugged(ds, opt.link, gv);
    const Eigen::VectorXd g0 = -pl.score(beta0, Eigen::VectorXd::Zero(p)).tail(p);
    std::vector<double> grid = lambda_grid(g0, n, p, opt.path);
    for (double& lam : grid) lam /= n;
    std::vector<char> mask(p, 1);
    auto family = [&pl, &pen_base, beta0](double lam) {
      return smooth_over_beta(&pl, beta0, pen_base.with_lambda(lam));
    };
    PathResult path;
    try {
      path = apf_path(family, grid, beta, mask, opt.path);
    } catch (const std::exception& e) {
      throw std::runtime_error("fit_parametric: path failed at outer iteration " +
                               std::to_string(outer) + ": " + e.what());
    }
    std::vector<TuneCandidate> cand_trace;
    cand_trace.reserve(path.entries.size());
    for (const auto& e : path.entries) {
      TuneCandidate tc;
      tc.lambda = e.lambda;
      const auto supp = support_of(e.beta);
      tc.support_size = static_cast<int>(supp.size());
      tc.df = effective_df(pl, beta0, e.beta, supp, pen_base.with_lambda(e.lambda));
      tc.deviance = deviance(pl, beta0, e.beta);
      cand_trace.push_back(tc);
    }
    const int sel = select_model(cand_trace, n, opt.criterion);
    if (sel < 0) {
      throw std::runtime_error("fit_parametric: every tuning candidate was excluded");
    }
    beta = path.entries[sel].beta;
    lambda_sel = cand_trace[sel].lambda;
    trace = std::move(cand_trace);

    Eigen::VectorXd now(1 + p + q);
    now(0) = beta0;
    now.segment(1, p) = beta;
    if (with_nu) now.tail(q) = nu.flatten();
    if ((now - prev).lpNorm<Eigen::Infinity>() <= opt.outer_tol) {
      converged = true;
      break;
    }
  }

  fit.lambda = lambda_sel;
  fit.penalty = pen_base.with_lambda(lambda_sel);
  fit.beta0_star = beta0;
  fit.beta = beta;
  if (with_nu) fit.nu = nu;
  fit.support = support_of(beta);
  fit.tuning_trace = std::move(trace);
  fit.diagnostics.outer_iterations = std::min(outer, opt.max_outer);
  fit.diagnostics.converged = converged;

  const GammaValues gv_final = with_nu ? gamma_values_from_nu(ds, nu) : gamma_values_zero(n);
  for (int i = 0; i < n; ++i) {
    if (gv_final.g01(i) + gv_final.g10(i) >= 1.0) ++fit.diagnostics.gamma_sum_warn_rows;
  }
  ObjectiveDiagnostics od;
  ParamVector theta{beta0, beta, with_nu ? std::optional<NuVector>(nu) : std::nullopt};
  loglik_param(theta, ds, opt.link, &od, opt.force_zero_gamma);
  fit.diagnostics.clamp_events = od.clamp_events;

  if (with_nu) {
    attach_covariance(fit, cov_parametric(fit, ds, opt.link));
  } else {
    attach_covariance(fit, cov_semiparametric(fit, ds, opt.link, gv_final));
  }
  return fit;
}

FitResult fit_semiparametric_impl(const Dataset& ds, const FitOptions& opt) {
  ds.validate();
  const int n = ds.n();
  const PenaltySpec pen_base(opt.penalty, 0.0, opt.shape());
  const double beta0_init = initial_intercept(ds, opt.link);

  struct GridPoint {
    double h, omega;
    GammaValues gam;
    std::vector<PathCandidate> cands;
    bool skipped = false;
  };
  std::vector<GridPoint> points;

  if (opt.force_zero_gamma) {
    GridPoint gp;
    gp.h = std::numeric_limits<double>::quiet_NaN();
    gp.omega = std::numeric_limits<double>::quiet_NaN();
    gp.gam = gamma_values_zero(n);
    points.push_back(std::move(gp));
  } else {
    const KernelGridEvaluator ws(ds, opt.use_pca, opt.pca_variance_threshold);
    auto [h_grid, w_grid] = smoothing_grids(ds.n_validation(), ws.p1_effective());
    if (opt.fixed_h) h_grid = {*opt.fixed_h};
    if (opt.fixed_omega) w_grid = {*opt.fixed_omega};
    if (ds.p1 == 0) h_grid = {h_grid.front()};  // bandwidth is inert without continuous columns
    if (ds.p2 == 0) w_grid = {w_grid.front()};
    for (double h : h_grid) {
      for (double w : w_grid) {
        GridPoint gp;
        gp.h = h;
        gp.omega = w;
        points.push_back(std::move(gp));
      }
    }
    parallel_for(static_cast<int>(points.size()), opt.threads, [&](int i) {
      points[i].gam = ws.evaluate(points[i].h, points[i].omega);
    });
  }

  parallel_for(static_cast<int>(points.size()), opt.threads, [&](int i) {
    GridPoint& gp = points[i];
    if (gp.gam.all_fallback && !opt.force_zero_gamma) {
      gp.skipped = true;
      return;
    }
    const PluggedLik pl = make_plugged(ds, opt.link, gp.gam);
    gp.cands = path_over_beta_bar(pl, pen_base, opt.path, beta0_init, gp.h, gp.omega);
    for (auto& c : gp.cands) c.grid_index = i;
  });

  std::vector<TuneCandidate> trace;
  std::vector<const PathCandidate*> flat;
  int skipped = 0;
  for (const auto& gp : points) {
    if (gp.skipped) {
      ++skipped;
      continue;
    }
    for (const auto& c : gp.cands) {
      trace.push_back(c.tc);
      flat.push_back(&c);
    }
  }
  if (flat.empty()) {
    throw std::runtime_error("fit_semiparametric: validation sample too sparse");
  }
  const int sel = select_model(trace, n, opt.criterion);
  if (sel < 0) {
    throw std::runtime_error("fit_semiparametric: every tuning candidate was excluded");
  }
  const PathCandidate& chosen = *flat[sel];
  const GridPoint& chosen_gp = points[chosen.grid_index];

  FitResult fit = base_result(ds, Method::semiparametric, opt);
  fit.lambda = trace[sel].lambda;
  fit.penalty = pen_base.with_lambda(fit.lambda);
  if (!opt.force_zero_gamma) {
    fit.h = chosen_gp.h;
    fit.omega = chosen_gp.omega;
  }
  fit.beta0_star = chosen.beta0;
  fit.beta = chosen.beta;
  fit.support = support_of(fit.beta);
  fit.tuning_trace = std::move(trace);
  fit.diagnostics.skipped_grid_points = skipped;
  fit.diagnostics.kernel_fallbacks = chosen_gp.gam.fallback_count;
  fit.diagnostics.gamma_sum_clamps = chosen_gp.gam.sum_clamp_count;

  ObjectiveDiagnostics od;
  const PluggedLik pl_sel = make_plugged(ds, opt.link, chosen_gp.gam);
  pl_sel.loglik(fit.beta0_star, fit.beta, &od);
  fit.diagnostics.clamp_events = od.clamp_events;

  attach_covariance(fit, cov_semiparametric(fit, ds, opt.link, chosen_gp.gam));
  return fit;
}

struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

Dataset standardized_copy(const Dataset& ds, Standardization& st) {
  Dataset out = ds;
  st.mean = Eigen::VectorXd::Zero(ds.p());
  st.scale = Eigen::VectorXd::Ones(ds.p());
  for (int c = 0; c < ds.p1; ++c) {  // continuous columns only
    const double m = ds.z.col(c).mean();
    const double sd = std::sqrt((ds.z.col(c).array() - m).square().sum() / (ds.n() - 1));
    if (sd > 0.0) {
      st.mean(c) = m;
      st.scale(c) = sd;
      out.z.col(c) = (ds.z.col(c).array() - m) / sd;
    }
  }
  return out;
}

void destandardize(FitResult& fit, const Standardization& st) {
  double shift = 0.0;
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    shift += fit.beta(j) * st.mean(j) / st.scale(j);
    fit.beta(j) /= st.scale(j);
  }
  fit.beta0_star -= shift;
  // covariance of (beta0*, beta_I): J cov J' with J the affine back-transform
  const int s = static_cast<int>(fit.support.size());
  const int dim = static_cast<int>(fit.covariance.rows());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(dim, dim);
  for (int k = 0; k < s; ++k) {
    const int j = fit.support[k];
    jac(0, 1 + k) = -st.mean(j) / st.scale(j);
    jac(1 + k, 1 + k) = 1.0 / st.scale(j);
  }
  fit.covariance = jac * fit.covariance * jac.transpose();
  fit.se = fit.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  if (fit.nu) {
    NuVector nu = *fit.nu;
    double s1 = 0.0, s3 = 0.0;
    for (Eigen::Index j = 0; j < nu.nu2.size(); ++j) {
      s1 += nu.nu2(j) * st.mean(j) / st.scale(j);
      s3 += nu.nu4(j) * st.mean(j) / st.scale(j);
      nu.nu2(j) /= st.scale(j);
      nu.nu4(j) /= st.scale(j);
    }
    nu.nu1 -= s1;
    nu.nu3 -= s3;
    fit.nu = nu;
  }
}

}  // namespace

FitResult fit_naive(const Dataset& ds, const FitOptions& opt) {
  return fit(ds, Method::naive, opt);
}

FitResult fit_parametric(const Dataset& ds, const FitOptions& opt) {
  return fit(ds, Method::parametric, opt);
}

FitResult fit_semiparametric(const Dataset& ds, const FitOptions& opt) {
  return fit(ds, Method::semiparametric, opt);
}

FitResult fit(const Dataset& ds, Method method, const FitOptions& opt) {
  if (opt.standardize) {
    Standardization st;
    FitOptions inner = opt;
    inner.standardize = false;
    const Dataset scaled = standardized_copy(ds, st);
    FitResult fr = fit(scaled, method, inner);
    destandardize(fr, st);
    return fr;
  }
  switch (method) {
    case Method::naive: return fit_naive_impl(ds, opt);
    case Method::parametric: return fit_parametric_impl(ds, opt);
    case Method::semiparametric: return fit_semiparametric_impl(ds, opt);
  }
  throw std::invalid_argument("fit: unknown method");
}

}  // namespace miscls
