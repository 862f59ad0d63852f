#include "miscls/predict.hpp"

#include <algorithm>
#include <stdexcept>

#include "miscls/mathutil.hpp"

namespace miscls {

Prediction predict(const FitResult& fit, const Eigen::MatrixXd& z) {
  if (z.cols() != fit.beta.size()) {
    throw std::invalid_argument("predict: covariate width does not match the fitted model");
  }
  const int n = static_cast<int>(z.rows());
  Prediction pred;
  pred.mu.resize(n);
  pred.y_hat.resize(n);
  const Eigen::VectorXd eta = (z * fit.beta).array() + fit.beta0_star;
  for (int i = 0; i < n; ++i) {
    pred.mu(i) = clamp_prob(link_inverse(fit.link, eta(i)));
    pred.y_hat[i] = pred.mu(i) > 0.5 ? 1 : 0;
  }
  return pred;
}

EvalMetrics prediction_metrics(const Prediction& pred, const std::vector<int>& truth) {
  const int n = static_cast<int>(truth.size());
  if (n == 0 || pred.mu.size() != n) {
    throw std::invalid_argument("prediction_metrics: length mismatch");
  }
  EvalMetrics m;
  std::vector<double> pos, neg;
  for (int i = 0; i < n; ++i) {
    if (truth[i] != 0 && truth[i] != 1) {
      throw std::invalid_argument("prediction_metrics: truth must be binary");
    }
    m.acc += (truth[i] == pred.y_hat[i]) ? 1.0 : 0.0;
    const double d = truth[i] - pred.mu(i);
    m.brier += d * d;
    (truth[i] == 1 ? pos : neg).push_back(pred.mu(i));
  }
  m.acc /= n;
  m.brier /= n;
  if (!pos.empty() && !neg.empty()) {
    std::sort(neg.begin(), neg.end());
    double wins = 0.0;
    for (double mu_pos : pos) {
      // count strictly smaller negatives
      wins += std::lower_bound(neg.begin(), neg.end(), mu_pos) - neg.begin();
    }
    m.auc = wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
  }
  return m;
}

}  // namespace miscls
