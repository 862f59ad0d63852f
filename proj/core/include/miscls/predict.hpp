#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "miscls/fitters.hpp"

namespace miscls {

struct Prediction {
  Eigen::VectorXd mu;       // fitted P(Y=1|z)
  std::vector<int> y_hat;   // 1{mu > 0.5}
};

Prediction predict(const FitResult& fit, const Eigen::MatrixXd& z);

struct EvalMetrics {
  double acc = 0.0;
  double brier = 0.0;
  std::optional<double> auc;  // absent when truth has a single class
};

// ACC, Brier, and the strict-inequality AUC (ties score zero).
EvalMetrics prediction_metrics(const Prediction& pred, const std::vector<int>& truth);

}  // namespace miscls
