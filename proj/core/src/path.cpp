#include "miscls/path.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace miscls {

void PathConfig::validate() const {
  if (!(varsigma >= 0.9 && varsigma < 1.0)) {
    throw std::invalid_argument("path ratio varsigma must lie in [0.9, 1)");
  }
  if (!(c > 0.0)) throw std::invalid_argument("path target constant c must be positive");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("inner tolerance must be positive");
  if (max_inner_iter < 1) throw std::invalid_argument("max_inner_iter must be positive");
  if (!(L_init > 0.0) || !(L_growth > 1.0)) {
    throw std::invalid_argument("invalid line-search constants");
  }
}

std::vector<double> lambda_grid(const Eigen::VectorXd& smooth_grad_at_zero, int n, int p,
                                const PathConfig& cfg) {
  cfg.validate();
  if (n < 1 || p < 2) throw std::invalid_argument("lambda_grid: need n >= 1 and p >= 2");
  const double lambda0 = smooth_grad_at_zero.lpNorm<Eigen::Infinity>();
  const double target = cfg.c * std::sqrt(std::log(static_cast<double>(p)) / n);
  if (lambda0 <= 0.0) return {target};
  int big_n = static_cast<int>(std::ceil(std::log(target / lambda0) / std::log(cfg.varsigma)));
  if (big_n < 1) big_n = 1;
  std::vector<double> grid(big_n);
  for (int t = 1; t <= big_n; ++t) grid[t - 1] = std::pow(cfg.varsigma, t) * lambda0;
  return grid;
}

namespace {

inline double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double penalized_l1(const Eigen::VectorXd& beta, const std::vector<char>& mask) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (mask[j]) s += std::fabs(beta(j));
  }
  return s;
}

}  // namespace

SolveResult proximal_gradient_solve(const SmoothProblem& smooth, double lambda,
                                    Eigen::VectorXd beta_init, const std::vector<char>& penalize_mask,
                                    const PathConfig& cfg, double L_start) {
  cfg.validate();
  const int dim = static_cast<int>(beta_init.size());
  if (static_cast<int>(penalize_mask.size()) != dim) {
    throw std::invalid_argument("proximal_gradient_solve: mask length mismatch");
  }
  Eigen::VectorXd x = std::move(beta_init);
  double f = smooth.value(x);
  if (!std::isfinite(f)) throw std::runtime_error("proximal_gradient_solve: non-finite objective");
  Eigen::VectorXd g = smooth.gradient(x);
  if (!g.allFinite()) throw std::runtime_error("proximal_gradient_solve: non-finite gradient");

  double L = std::max(L_start, 1e-12);
  Eigen::VectorXd cand(dim);
  SolveResult out;
  for (int k = 1; k <= cfg.max_inner_iter; ++k) {
    double f_cand = 0.0;
    while (true) {
      const double thresh = lambda / L;
      for (int j = 0; j < dim; ++j) {
        const double v = x(j) - g(j) / L;
        cand(j) = penalize_mask[j] ? soft_threshold(v, thresh) : v;
      }
      const Eigen::VectorXd diff = cand - x;
      f_cand = smooth.value(cand);
      const double quad = f + g.dot(diff) + 0.5 * L * diff.squaredNorm();
      if (std::isfinite(f_cand) && f_cand <= quad + 1e-12 * std::max(1.0, std::fabs(f))) break;
      L *= cfg.L_growth;
      if (L > 1e14) {
        // any smooth objective is majorized at finite L; the gradient must be wrong
        throw std::runtime_error(
            "proximal_gradient_solve: line search exhausted (inconsistent gradient)");
      }
    }

    const double obj_old = f + lambda * penalized_l1(x, penalize_mask);
    const double obj_new = f_cand + lambda * penalized_l1(cand, penalize_mask);
    if (obj_new > obj_old + 1e-8 * std::max(1.0, std::fabs(obj_old))) {
      throw std::runtime_error("proximal_gradient_solve: accepted step increased the objective");
    }

    const double move = (cand - x).lpNorm<Eigen::Infinity>();
    x = cand;
    f = f_cand;
    out.iters = k;
    if (move <= cfg.inner_tol) {
      out.converged = true;
      break;
    }
    g = smooth.gradient(x);
    if (!g.allFinite()) throw std::runtime_error("proximal_gradient_solve: non-finite gradient");
  }
  out.beta = std::move(x);
  out.objective = f + lambda * penalized_l1(out.beta, penalize_mask);
  out.L_final = L;
  return out;
}

PathResult apf_path(const std::function<SmoothProblem(double)>& smooth_family,
                    const std::vector<double>& grid, Eigen::VectorXd beta_init,
                    const std::vector<char>& penalize_mask, const PathConfig& cfg) {
  cfg.validate();
  if (grid.empty()) throw std::invalid_argument("apf_path: empty lambda grid");
  for (std::size_t t = 1; t < grid.size(); ++t) {
    if (!(grid[t] < grid[t - 1])) throw std::invalid_argument("apf_path: grid must be decreasing");
  }
  PathResult out;
  out.entries.reserve(grid.size());
  Eigen::VectorXd warm = std::move(beta_init);
  double L = cfg.L_init;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const double lam = grid[t];
    SmoothProblem smooth = smooth_family(lam);
    SolveResult res;
    try {
      res = proximal_gradient_solve(smooth, lam, warm, penalize_mask, cfg,
                                    std::max(L / cfg.L_growth, cfg.L_init));
    } catch (const std::exception& e) {
      throw std::runtime_error("apf_path at lambda index " + std::to_string(t) + " (" +
                               std::to_string(lam) + "): " + e.what());
    }
    warm = res.beta;
    L = res.L_final;
    out.entries.push_back(PathEntry{lam, std::move(res.beta), res.iters, res.objective,
                                    res.converged});
  }
  return out;
}

}  // namespace miscls
