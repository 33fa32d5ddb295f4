#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ssnkit/classify/base.hpp"

namespace ssnkit {

/// Gaussian naive Bayes with class-frequency priors. Every per-class
/// variance is widened by var_smoothing times the largest feature variance of
/// the training set (or by var_smoothing alone when all features are
/// constant). Scores are normalized log posteriors; classes absent from
/// training score the lowest finite double.
class GaussianNB : public Classifier {
 public:
  explicit GaussianNB(double var_smoothing = 1e-9) : smoothing_(var_smoothing) {
    if (!(var_smoothing > 0)) throw ConfigError("gaussian_nb: var_smoothing must be > 0");
  }
  std::string name() const override { return "gaussian_nb"; }
  const Eigen::MatrixXd& means() const { return mean_; }
  const Eigen::MatrixXd& variances() const { return var_; }
  const Eigen::VectorXd& log_priors() const { return log_prior_; }

  /// Unnormalized log p(c) + log p(x | c) for one sample.
  Eigen::VectorXd joint_log_likelihood(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(num_classes());
    for (int c = 0; c < num_classes(); ++c) {
      if (!seen(c)) {
        out(c) = -std::numeric_limits<double>::infinity();
        continue;
      }
      double s = log_prior_(c);
      for (Eigen::Index f = 0; f < x.size(); ++f) {
        const double v = var_(c, f);
        const double d = x(f) - mean_(c, f);
        s -= 0.5 * (std::log(2 * std::numbers::pi * v) + d * d / v);
      }
      out(c) = s;
    }
    return out;
  }

 protected:
  void fit_impl(const Eigen::MatrixXd& X, std::span<const int> y, int classes) override {
    const Eigen::Index p = X.cols();
    const Eigen::RowVectorXd global_mean = X.colwise().mean();
    const double max_var = (X.rowwise() - global_mean).array().square().colwise().mean().maxCoeff();
    const double eps = max_var > 0 ? smoothing_ * max_var : smoothing_;
    mean_ = Eigen::MatrixXd::Zero(classes, p);
    var_ = Eigen::MatrixXd::Zero(classes, p);
    Eigen::VectorXd count = Eigen::VectorXd::Zero(classes);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      mean_.row(y[static_cast<std::size_t>(i)]) += X.row(i);
      count(y[static_cast<std::size_t>(i)]) += 1.0;
    }
    for (int c = 0; c < classes; ++c)
      if (count(c) > 0) mean_.row(c) /= count(c);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const int c = y[static_cast<std::size_t>(i)];
      var_.row(c) += (X.row(i) - mean_.row(c)).array().square().matrix();
    }
    log_prior_.resize(classes);
    for (int c = 0; c < classes; ++c) {
      if (count(c) > 0) var_.row(c) /= count(c);
      var_.row(c).array() += eps;
      log_prior_(c) = count(c) > 0 ? std::log(count(c) / static_cast<double>(X.rows()))
                                   : -std::numeric_limits<double>::infinity();
    }
  }

  Eigen::MatrixXd scores_impl(const Eigen::MatrixXd& X) const override {
    Eigen::MatrixXd S(X.rows(), num_classes());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      Eigen::VectorXd jll = joint_log_likelihood(X.row(i).transpose());
      double m = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < num_classes(); ++c)
        if (seen(c)) m = std::max(m, jll(c));
      double sum = 0.0;
      for (int c = 0; c < num_classes(); ++c)
        if (seen(c)) sum += std::exp(jll(c) - m);
      const double lse = m + std::log(sum);
      for (int c = 0; c < num_classes(); ++c)
        S(i, c) = seen(c) ? jll(c) - lse : std::numeric_limits<double>::lowest();
    }
    return S;
  }

 private:
  double smoothing_;
  Eigen::MatrixXd mean_, var_;
  Eigen::VectorXd log_prior_;
};

}  // namespace ssnkit
