#pragma once

// Spectral clustering on an RBF affinity over feature rows: embed with the
// eigenvectors of the k smallest eigenvalues of I - D^-1/2 W D^-1/2,
// row-normalize, then run k-means.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cstdint>
#include <optional>

#include "ssnkit/cluster/kmeans.hpp"
#include "ssnkit/cluster/types.hpp"
#include "ssnkit/errors.hpp"

namespace ssnkit {

/// 1 / (features x mean per-feature variance); 1 for constant data.
inline double default_rbf_gamma(const Eigen::MatrixXd& X) {
  if (X.rows() == 0 || X.cols() == 0) return 1.0;
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const double mean_var =
      (X.rowwise() - mean).array().square().sum() / static_cast<double>(X.rows() * X.cols());
  return mean_var > 0 ? 1.0 / (static_cast<double>(X.cols()) * mean_var) : 1.0;
}

inline ClusterAssignment spectral_clustering(const Eigen::MatrixXd& X, int k, std::uint64_t seed = 0,
                                             std::optional<double> gamma = std::nullopt) {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (k > X.rows()) throw ConfigError("k exceeds the number of points");
  const auto n = X.rows();
  ClusterAssignment out;
  if (k == 1) {
    out.labels.assign(static_cast<std::size_t>(n), 0);
    out.k_found = 1;
    out.inertia = within_cluster_sse(X, out.labels);
    return out;
  }
  const double g = gamma.value_or(default_rbf_gamma(X));
  const Eigen::MatrixXd W = (-g * squared_distances(X, X)).array().exp().matrix();
  const Eigen::VectorXd inv_sqrt = W.rowwise().sum().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd Lsym =
      Eigen::MatrixXd::Identity(n, n) - inv_sqrt.asDiagonal() * W * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lsym);
  Eigen::MatrixXd Y = es.eigenvectors().leftCols(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = Y.row(i).norm();
    if (norm > 0) Y.row(i) /= norm;
  }
  KMeansOptions opt;
  opt.n_init = 10;
  out = kmeans(Y, k, seed, opt);
  out.inertia = within_cluster_sse(X, out.labels);
  out.history.clear();
  return out;
}

}  // namespace ssnkit
