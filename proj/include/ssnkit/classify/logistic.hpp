#pragma once

// Multinomial logistic regression:
//   f(W, b) = -(1/n) sum_i log softmax(x_i W + b)_{y_i} + (l2/2) |W|_F^2
// with the bias left unpenalized.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ssnkit/classify/base.hpp"

namespace ssnkit {

struct LogisticConfig {
  double l2 = 1e-2;
  double learning_rate = 0.5;
  int epochs = 300;
};

struct LogisticObjective {
  double loss = 0.0;
  Eigen::MatrixXd grad_W;  // features x classes
  Eigen::RowVectorXd grad_b;
};

namespace detail {
inline Eigen::MatrixXd softmax_rows(Eigen::MatrixXd Z) {
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    Z.row(i).array() -= Z.row(i).maxCoeff();
    Z.row(i) = Z.row(i).array().exp().matrix();
    Z.row(i) /= Z.row(i).sum();
  }
  return Z;
}
}  // namespace detail

inline LogisticObjective logistic_objective(const Eigen::MatrixXd& X, std::span<const int> y, const Eigen::MatrixXd& W,
                                            const Eigen::RowVectorXd& b, double l2) {
  const auto n = static_cast<double>(X.rows());
  Eigen::MatrixXd Z = X * W;
  Z.rowwise() += b;
  LogisticObjective out;
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    const double m = Z.row(i).maxCoeff();
    const double lse = m + std::log((Z.row(i).array() - m).exp().sum());
    out.loss -= Z(i, y[static_cast<std::size_t>(i)]) - lse;
  }
  out.loss = out.loss / n + 0.5 * l2 * W.squaredNorm();
  Eigen::MatrixXd P = detail::softmax_rows(std::move(Z));
  for (Eigen::Index i = 0; i < P.rows(); ++i) P(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  out.grad_W = X.transpose() * P / n + l2 * W;
  out.grad_b = P.colwise().sum() / n;
  return out;
}

/// Full-batch gradient descent from zero weights. Scores are softmax
/// probabilities.
class LogisticRegression : public Classifier {
 public:
  explicit LogisticRegression(LogisticConfig cfg = {}) : cfg_(cfg) {
    if (cfg.l2 < 0 || !(cfg.learning_rate > 0) || cfg.epochs < 0) throw ConfigError("logistic_regression: invalid config");
  }
  std::string name() const override { return "logistic_regression"; }
  const Eigen::MatrixXd& weights() const { return W_; }
  const Eigen::RowVectorXd& bias() const { return b_; }

 protected:
  void fit_impl(const Eigen::MatrixXd& X, std::span<const int> y, int classes) override {
    if (distinct_classes() < 2) throw ConfigError("logistic_regression needs at least two classes");
    W_ = Eigen::MatrixXd::Zero(X.cols(), classes);
    b_ = Eigen::RowVectorXd::Zero(classes);
    for (int e = 0; e < cfg_.epochs; ++e) {
      const auto g = logistic_objective(X, y, W_, b_, cfg_.l2);
      W_ -= cfg_.learning_rate * g.grad_W;
      b_ -= cfg_.learning_rate * g.grad_b;
    }
  }

  Eigen::MatrixXd scores_impl(const Eigen::MatrixXd& X) const override {
    Eigen::MatrixXd Z = X * W_;
    Z.rowwise() += b_;
    return detail::softmax_rows(std::move(Z));
  }

 private:
  LogisticConfig cfg_;
  Eigen::MatrixXd W_;
  Eigen::RowVectorXd b_;
};

}  // namespace ssnkit
