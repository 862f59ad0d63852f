#pragma once

#include <Eigen/Core>
#include <functional>

namespace miscls {

struct SmoothProblem {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

struct LbfgsOptions {
  int max_iter = 300;
  int memory = 10;
  double grad_tol = 1e-9;    // sup-norm of the gradient
  double step_tol = 1e-14;   // sup-norm of the step
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iters = 0;
  bool converged = false;
};

// Limited-memory BFGS with Armijo backtracking. Throws std::runtime_error if
// the objective is non-finite at the start or no finite step can be found.
LbfgsResult lbfgs_minimize(const SmoothProblem& problem, Eigen::VectorXd x0,
                           const LbfgsOptions& opts = {});

}  // namespace miscls
