#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "ssnkit/classify/base.hpp"

namespace ssnkit {

/// Euclidean k-nearest-neighbor vote. Scores are vote fractions; equal
/// distances rank the lower training index first.
class KnnClassifier : public Classifier {
 public:
  explicit KnnClassifier(int k_votes = 5) : k_(k_votes) {
    if (k_votes < 1) throw ConfigError("knn: k_votes must be >= 1");
  }
  std::string name() const override { return "knn"; }
  int k_votes() const { return k_; }

  /// Training indices of the k nearest neighbors of `query`, nearest first.
  std::vector<int> neighbors(const Eigen::VectorXd& query) const {
    const auto n = static_cast<std::size_t>(X_.rows());
    std::vector<std::pair<double, int>> dist(n);
    for (std::size_t i = 0; i < n; ++i)
      dist[i] = {(X_.row(static_cast<Eigen::Index>(i)).transpose() - query).squaredNorm(), static_cast<int>(i)};
    const auto k = static_cast<std::ptrdiff_t>(k_);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::vector<int> out(static_cast<std::size_t>(k_));
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = dist[t].second;
    return out;
  }

 protected:
  void fit_impl(const Eigen::MatrixXd& X, std::span<const int> y, int) override {
    if (k_ > X.rows()) throw ConfigError("knn: k_votes exceeds the training set size");
    X_ = X;
    y_.assign(y.begin(), y.end());
  }

  Eigen::MatrixXd scores_impl(const Eigen::MatrixXd& X) const override {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(X.rows(), num_classes());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (int j : neighbors(X.row(i).transpose())) S(i, y_[static_cast<std::size_t>(j)]) += 1.0 / k_;
    return S;
  }

 private:
  int k_;
  Eigen::MatrixXd X_;
  std::vector<int> y_;
};

}  // namespace ssnkit
