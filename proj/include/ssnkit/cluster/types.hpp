#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ssnkit/errors.hpp"

namespace ssnkit {

inline constexpr int kNoise = -1;

struct ClusterAssignment {
  /// Per-row cluster id; kNoise marks DBSCAN outliers.
  std::vector<int> labels;
  int k_found = 0;
  std::optional<double> inertia;
  std::optional<double> log_likelihood;
  /// Objective after each iteration: SSE for k-means, log-likelihood for GMM.
  std::vector<double> history;
  /// Agglomerative only: merges between clusters not joined by any SSN edge.
  int forced_merges = 0;
};

/// Renumbers non-noise labels densely in order of first occurrence.
inline int canonicalize_labels(std::vector<int>& labels) {
  std::unordered_map<int, int> remap;
  for (auto& l : labels) {
    if (l == kNoise) continue;
    const auto [it, inserted] = remap.emplace(l, static_cast<int>(remap.size()));
    l = it->second;
  }
  return static_cast<int>(remap.size());
}

/// Squared Euclidean distances between every row of X and every row of C.
inline Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& X, const Eigen::MatrixXd& C) {
  const Eigen::VectorXd xn = X.rowwise().squaredNorm();
  const Eigen::VectorXd cn = C.rowwise().squaredNorm();
  Eigen::MatrixXd D = -2.0 * X * C.transpose();
  D.colwise() += xn;
  D.rowwise() += cn.transpose();
  return D.cwiseMax(0.0);
}

/// Sum of squared distances from each row to the mean of its cluster.
inline double within_cluster_sse(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    if (l < 0) continue;
    sums.row(l) += X.row(i);
    counts(l) += 1.0;
  }
  double sse = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    if (l < 0) continue;
    sse += (X.row(i) - sums.row(l) / counts(l)).squaredNorm();
  }
  return sse;
}

}  // namespace ssnkit
