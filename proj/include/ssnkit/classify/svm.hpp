#pragma once

// One-vs-rest linear SVM trained with Pegasos. Each binary problem minimizes
//   f(w) = (lambda/2) |w|^2 + (1/n) sum_i max(0, 1 - y_i <w, [x_i, 1]>)
// with lambda = 1 / (C n); the bias is the last weight and is penalized too.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ssnkit/classify/base.hpp"
#include "ssnkit/random.hpp"

namespace ssnkit {

struct SvmConfig {
  double C = 1.0;
  int epochs = 20;
  std::uint64_t seed = 0;
};

/// Appends a constant-one column.
inline Eigen::MatrixXd augment_bias(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd A(X.rows(), X.cols() + 1);
  A.leftCols(X.cols()) = X;
  A.col(X.cols()).setOnes();
  return A;
}

/// `y` holds +1 / -1 labels.
inline double hinge_objective(const Eigen::MatrixXd& Xa, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                              double lambda) {
  const Eigen::VectorXd margin = y.cwiseProduct(Xa * w);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margin.size(); ++i) loss += std::max(0.0, 1.0 - margin(i));
  return 0.5 * lambda * w.squaredNorm() + loss / static_cast<double>(Xa.rows());
}

/// Subgradient of hinge_objective; terms exactly at the hinge contribute 0.
inline Eigen::VectorXd hinge_subgradient(const Eigen::MatrixXd& Xa, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                                         double lambda) {
  const Eigen::VectorXd margin = y.cwiseProduct(Xa * w);
  Eigen::VectorXd g = lambda * w;
  for (Eigen::Index i = 0; i < margin.size(); ++i)
    if (margin(i) < 1.0) g -= (y(i) / static_cast<double>(Xa.rows())) * Xa.row(i).transpose();
  return g;
}

/// Scores are the signed margins <w_c, [x, 1]>.
class LinearSvm : public Classifier {
 public:
  explicit LinearSvm(SvmConfig cfg = {}) : cfg_(cfg) {
    if (!(cfg.C > 0) || cfg.epochs < 1) throw ConfigError("linear_svm: C must be > 0 and epochs >= 1");
  }
  std::string name() const override { return "linear_svm"; }
  /// Column c holds the augmented weight vector of class c.
  const Eigen::MatrixXd& weights() const { return W_; }

 protected:
  void fit_impl(const Eigen::MatrixXd& X, std::span<const int> y, int classes) override {
    if (distinct_classes() < 2) throw ConfigError("linear_svm needs at least two classes");
    const Eigen::MatrixXd Xa = augment_bias(X);
    const auto n = static_cast<std::uint64_t>(Xa.rows());
    const double lambda = 1.0 / (cfg_.C * static_cast<double>(n));
    const double radius = 1.0 / std::sqrt(lambda);
    W_ = Eigen::MatrixXd::Zero(Xa.cols(), classes);
    for (int c = 0; c < classes; ++c) {
      if (!seen(c)) continue;
      Rng rng = make_rng(cfg_.seed, static_cast<std::uint64_t>(c));
      Eigen::VectorXd w = Eigen::VectorXd::Zero(Xa.cols());
      const std::uint64_t steps = n * static_cast<std::uint64_t>(cfg_.epochs);
      for (std::uint64_t t = 1; t <= steps; ++t) {
        const auto i = static_cast<Eigen::Index>(uniform_index(rng, n));
        const double yi = y[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const bool active = yi * Xa.row(i).dot(w) < 1.0;
        w *= 1.0 - eta * lambda;
        if (active) w += eta * yi * Xa.row(i).transpose();
        const double norm = w.norm();
        if (norm > radius) w *= radius / norm;
      }
      W_.col(c) = w;
    }
  }

  Eigen::MatrixXd scores_impl(const Eigen::MatrixXd& X) const override { return augment_bias(X) * W_; }

 private:
  SvmConfig cfg_;
  Eigen::MatrixXd W_;
};

}  // namespace ssnkit
