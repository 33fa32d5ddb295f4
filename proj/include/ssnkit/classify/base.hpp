#pragma once

// Common classifier interface. Class ids are dense integers 0..C-1 with C
// one past the largest training label; score columns follow the same ids.

#include <Eigen/Dense>
#include <chrono>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ssnkit/errors.hpp"

namespace ssnkit {

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string name() const = 0;

  /// Trains on X (one sample per row) and records the wall-clock fit time.
  void fit(const Eigen::MatrixXd& X, std::span<const int> y) {
    if (X.rows() == 0) throw ConfigError(name() + ": empty training set");
    if (static_cast<Eigen::Index>(y.size()) != X.rows()) throw ConfigError(name() + ": label count does not match rows");
    int classes = 0;
    for (int label : y) {
      if (label < 0) throw ConfigError(name() + ": class ids must be >= 0");
      classes = std::max(classes, label + 1);
    }
    seen_.assign(static_cast<std::size_t>(classes), false);
    for (int label : y) seen_[static_cast<std::size_t>(label)] = true;
    features_ = X.cols();
    const auto start = std::chrono::steady_clock::now();
    try {
      fit_impl(X, y, classes);
    } catch (...) {
      seen_.clear();  // a failed fit leaves the classifier unfitted
      throw;
    }
    train_time_sec_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  /// One row per sample, one column per class.
  Eigen::MatrixXd scores(const Eigen::MatrixXd& X) const {
    if (seen_.empty()) throw ConfigError(name() + ": predict called before fit");
    if (X.cols() != features_) throw DimensionError(name() + ": feature count differs from training");
    return scores_impl(X);
  }

  /// Argmax of the scores over classes seen in training; ties go to the
  /// smallest class id.
  std::vector<int> predict(const Eigen::MatrixXd& X) const { return argmax(scores(X)); }

  std::vector<int> argmax(const Eigen::MatrixXd& S) const {
    std::vector<int> out(static_cast<std::size_t>(S.rows()));
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
      int best = -1;
      for (int c = 0; c < num_classes(); ++c) {
        if (!seen_[static_cast<std::size_t>(c)]) continue;
        if (best < 0 || S(i, c) > S(i, best)) best = c;
      }
      out[static_cast<std::size_t>(i)] = best;
    }
    return out;
  }

  int num_classes() const { return static_cast<int>(seen_.size()); }
  bool seen(int c) const { return seen_.at(static_cast<std::size_t>(c)); }
  double train_time_sec() const { return train_time_sec_; }

 protected:
  virtual void fit_impl(const Eigen::MatrixXd& X, std::span<const int> y, int classes) = 0;
  virtual Eigen::MatrixXd scores_impl(const Eigen::MatrixXd& X) const = 0;

  int distinct_classes() const {
    int n = 0;
    for (bool s : seen_) n += s ? 1 : 0;
    return n;
  }

 private:
  std::vector<bool> seen_;
  Eigen::Index features_ = 0;
  double train_time_sec_ = 0.0;
};

}  // namespace ssnkit
