#include "miscls/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace miscls {

PenaltyKind penalty_from_string(const std::string& name) {
  if (name == "scad") return PenaltyKind::scad;
  if (name == "mcp") return PenaltyKind::mcp;
  if (name == "l1" || name == "lasso") return PenaltyKind::l1;
  throw std::invalid_argument("unknown penalty: " + name);
}

std::string to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::scad: return "scad";
    case PenaltyKind::mcp: return "mcp";
    case PenaltyKind::l1: return "l1";
  }
  return "scad";
}

double default_shape(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::scad: return 3.7;
    case PenaltyKind::mcp: return 3.0;
    case PenaltyKind::l1: return 0.0;
  }
  return 3.7;
}

PenaltySpec::PenaltySpec(PenaltyKind k, double lam, double shape) : kind(k), lambda(lam), a(shape) {
  if (lambda < 0.0) throw std::invalid_argument("penalty: lambda must be nonnegative");
  if (kind == PenaltyKind::scad && a <= 2.0) throw std::invalid_argument("SCAD requires a > 2");
  if (kind == PenaltyKind::mcp && a <= 0.0) throw std::invalid_argument("MCP requires a > 0");
}

PenaltyEval penalty_eval(const PenaltySpec& spec, double xi) {
  if (xi < 0.0) throw std::invalid_argument("penalty_eval: xi must be nonnegative");
  const double lam = spec.lambda;
  const double a = spec.a;
  switch (spec.kind) {
    case PenaltyKind::l1:
      return {lam * xi, lam, 0.0};
    case PenaltyKind::scad: {
      if (xi <= lam) return {lam * xi, lam, 0.0};
      if (xi <= a * lam) {
        const double rho = (2.0 * a * lam * xi - xi * xi - lam * lam) / (2.0 * (a - 1.0));
        const double rho1 = (a * lam - xi) / (a - 1.0);
        return {rho, rho1, -1.0 / (a - 1.0)};
      }
      return {lam * lam * (a + 1.0) / 2.0, 0.0, 0.0};
    }
    case PenaltyKind::mcp: {
      if (xi < a * lam) {
        return {lam * xi - xi * xi / (2.0 * a), lam - xi / a, -1.0 / a};
      }
      return {a * lam * lam / 2.0, 0.0, 0.0};
    }
  }
  return {0.0, 0.0, 0.0};
}

namespace {

double prox_objective(const PenaltySpec& spec, double u, double x, double step) {
  const double d = u - x;
  return d * d / (2.0 * step) + penalty_eval(spec, std::fabs(u)).rho;
}

}  // namespace

double penalty_prox(const PenaltySpec& spec, double x, double step) {
  if (step <= 0.0) throw std::invalid_argument("penalty_prox: step must be positive");
  const double lam = spec.lambda;
  const double a = spec.a;
  const double ax = std::fabs(x);
  const double sgn = (x < 0.0) ? -1.0 : 1.0;
  if (ax == 0.0 || lam == 0.0) {
    return (lam == 0.0) ? x : 0.0;
  }

  if (spec.kind == PenaltyKind::l1) {
    return sgn * std::max(0.0, ax - step * lam);
  }

  // Piecewise quadratic in u >= 0; the minimum lies at a piece-stationary
  // point clipped into its piece or at a breakpoint.
  std::vector<double> cand{0.0};
  auto push_clipped = [&cand](double u, double lo, double hi) {
    cand.push_back(std::clamp(u, lo, hi));
  };
  if (spec.kind == PenaltyKind::scad) {
    push_clipped(ax - step * lam, 0.0, lam);                    // piece [0, lam]
    const double denom = a - 1.0 - step;
    if (denom != 0.0) {
      push_clipped((ax * (a - 1.0) - step * a * lam) / denom, lam, a * lam);
    }
    cand.push_back(lam);
    cand.push_back(a * lam);
    if (ax >= a * lam) cand.push_back(ax);                      // flat region
  } else {  // MCP
    const double denom = a - step;
    if (denom != 0.0) {
      push_clipped(a * (ax - step * lam) / denom, 0.0, a * lam);
    }
    cand.push_back(a * lam);
    if (ax >= a * lam) cand.push_back(ax);
  }

  std::sort(cand.begin(), cand.end());
  double best_u = cand.front();
  double best_f = prox_objective(spec, best_u, ax, step);
  for (std::size_t i = 1; i < cand.size(); ++i) {
    if (cand[i] == cand[i - 1]) continue;
    const double f = prox_objective(spec, cand[i], ax, step);
    if (f < best_f) {
      best_f = f;
      best_u = cand[i];
    }
  }
  return sgn * best_u;
}

double concave_part_value(const PenaltySpec& spec, const Eigen::VectorXd& beta) {
  if (spec.kind == PenaltyKind::l1) return 0.0;
  double q = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double xi = std::fabs(beta(j));
    q += penalty_eval(spec, xi).rho - spec.lambda * xi;
  }
  return q;
}

Eigen::VectorXd concave_part_gradient(const PenaltySpec& spec, const Eigen::VectorXd& beta) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(beta.size());
  if (spec.kind == PenaltyKind::l1) return g;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double b = beta(j);
    if (b == 0.0) continue;  // rho'(0+) = lambda cancels the L1 slope
    const double s = (b < 0.0) ? -1.0 : 1.0;
    g(j) = (penalty_eval(spec, std::fabs(b)).rho1 - spec.lambda) * s;
  }
  return g;
}

}  // namespace miscls
