#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "miscls/optim.hpp"

namespace miscls {

struct PathConfig {
  double varsigma = 0.95;   // grid ratio in [0.9, 1)
  double c = 0.5;           // target constant, lambda_N = c*sqrt(log p / n)
  double inner_tol = 1e-7;  // sup-norm change between iterates
  int max_inner_iter = 5000;
  double L_init = 1.0;
  double L_growth = 2.0;

  void validate() const;
};

// Geometric grid lambda_t = varsigma^t * lambda0 down to c*sqrt(log p / n),
// with lambda0 = ||grad of the smooth loss at beta=0||_inf over penalized
// coordinates (the smallest lambda with an all-zero solution). lambda0 itself
// is excluded.
std::vector<double> lambda_grid(const Eigen::VectorXd& smooth_grad_at_zero, int n, int p,
                                const PathConfig& cfg);

struct SolveResult {
  Eigen::VectorXd beta;
  int iters = 0;
  bool converged = false;
  double objective = 0.0;  // smooth value + lambda * l1 on penalized coords
  double L_final = 0.0;
};

// Proximal gradient with backtracking line search on
//   F_tilde(beta) + lambda * sum_{j: mask} |beta_j|.
// Coordinates with mask[j] == false (e.g. the intercept) are never
// thresholded.
SolveResult proximal_gradient_solve(const SmoothProblem& smooth, double lambda,
                                    Eigen::VectorXd beta_init, const std::vector<char>& penalize_mask,
                                    const PathConfig& cfg, double L_start);

struct PathEntry {
  double lambda = 0.0;
  Eigen::VectorXd beta;
  int iters = 0;
  double objective = 0.0;
  bool converged = false;
};

struct PathResult {
  std::vector<PathEntry> entries;
};

// Approximate regularization path following: solves the grid sequentially
// with warm starts. smooth_family(lambda) must return the smooth part
// including the concave penalty component Q_lambda.
PathResult apf_path(const std::function<SmoothProblem(double)>& smooth_family,
                    const std::vector<double>& grid, Eigen::VectorXd beta_init,
                    const std::vector<char>& penalize_mask, const PathConfig& cfg);

}  // namespace miscls
