#pragma once

#include <Eigen/Core>
#include <string>

namespace miscls {

enum class PenaltyKind { scad, mcp, l1 };

PenaltyKind penalty_from_string(const std::string& name);
std::string to_string(PenaltyKind kind);
double default_shape(PenaltyKind kind);  // SCAD 3.7, MCP 3.0

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::scad;
  double lambda = 0.0;
  double a = 3.7;

  PenaltySpec() = default;
  PenaltySpec(PenaltyKind k, double lam, double shape);
  PenaltySpec with_lambda(double lam) const { return PenaltySpec(kind, lam, a); }
};

struct PenaltyEval {
  double rho;   // rho_lambda(xi)
  double rho1;  // first derivative
  double rho2;  // second derivative
};

PenaltyEval penalty_eval(const PenaltySpec& spec, double xi);

// argmin_u (1/(2*step)) (u - x)^2 + rho_lambda(|u|); closed-form candidates,
// global minimum, ties toward the smaller |u|.
double penalty_prox(const PenaltySpec& spec, double x, double step);

// Q_lambda(beta) = sum_j [rho(|beta_j|) - lambda|beta_j|], the concave part of
// the penalty; identically zero for L1.
double concave_part_value(const PenaltySpec& spec, const Eigen::VectorXd& beta);
Eigen::VectorXd concave_part_gradient(const PenaltySpec& spec, const Eigen::VectorXd& beta);

}  // namespace miscls
