#include "miscls/optim.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace miscls {

namespace {
LbfgsResult lbfgsResultFrom(Eigen::VectorXd x, double f, int it, bool conv) {
  return LbfgsResult{std::move(x), f, it, conv};
}
}  // namespace

LbfgsResult lbfgs_minimize(const SmoothProblem& problem, Eigen::VectorXd x0,
                           const LbfgsOptions& opts) {
  const int n = static_cast<int>(x0.size());
  Eigen::VectorXd x = std::move(x0);
  double f = problem.value(x);
  if (!std::isfinite(f)) throw std::runtime_error("lbfgs: objective non-finite at start");
  Eigen::VectorXd g = problem.gradient(x);

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      return lbfgsResultFrom(std::move(x), f, iter - 1, true);
    }

    // two-loop recursion
    Eigen::VectorXd q = g;
    const int m = static_cast<int>(s_hist.size());
    Eigen::VectorXd alpha(m);
    for (int i = m - 1; i >= 0; --i) {
      alpha(i) = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha(i) * y_hist[i];
    }
    if (m > 0) {
      const double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (int i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha(i) - beta) * s_hist[i];
    }
    Eigen::VectorXd d = -q;
    double dg = d.dot(g);
    if (!(dg < 0.0)) {  // not a descent direction, fall back to steepest descent
      d = -g;
      dg = -g.squaredNorm();
    }

    // Armijo backtracking
    double step = 1.0;
    Eigen::VectorXd x_new(n);
    double f_new = 0.0;
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * d;
      f_new = problem.value(x_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * dg) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) {
      // no progress possible along this direction
      return lbfgsResultFrom(std::move(x), f, iter, g.lpNorm<Eigen::Infinity>() <= 1e2 * opts.grad_tol);
    }

    Eigen::VectorXd g_new = problem.gradient(x_new);
    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double move = (x_new - x).lpNorm<Eigen::Infinity>();
    x = std::move(x_new);
    f = f_new;
    g = std::move(g_new);
    if (move <= opts.step_tol) {
      return lbfgsResultFrom(std::move(x), f, iter, true);
    }
  }
  return lbfgsResultFrom(std::move(x), f, opts.max_iter,
                         g.lpNorm<Eigen::Infinity>() <= 1e2 * opts.grad_tol);
}

}  // namespace miscls
