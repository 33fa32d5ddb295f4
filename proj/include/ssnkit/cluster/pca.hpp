#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>

#include "ssnkit/embed/spectral.hpp"
#include "ssnkit/errors.hpp"

namespace ssnkit {

/// Projects the centered rows of X onto their top `components` principal
/// axes. Uses the n x n Gram matrix when there are more features than rows.
/// Each axis is sign-fixed so its largest-magnitude score is positive.
inline Eigen::MatrixXd pca_project(const Eigen::MatrixXd& X, int components) {
  if (components < 1) throw DimensionError("PCA needs at least one component");
  const auto n = X.rows();
  const auto p = X.cols();
  const auto m = std::min<Eigen::Index>(components, std::min(n, p));
  const Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(n, components);
  if (n == 0 || m == 0) return scores;
  if (p > n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Xc * Xc.transpose());
    for (Eigen::Index c = 0; c < m; ++c) {
      const Eigen::Index col = n - 1 - c;
      const double lambda = std::max(0.0, es.eigenvalues()(col));
      Eigen::VectorXd s = es.eigenvectors().col(col) * std::sqrt(lambda);
      detail::canonical_sign(s);
      scores.col(c) = s;
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Xc.transpose() * Xc);
    for (Eigen::Index c = 0; c < m; ++c) {
      Eigen::VectorXd s = Xc * es.eigenvectors().col(p - 1 - c);
      detail::canonical_sign(s);
      scores.col(c) = s;
    }
  }
  return scores;
}

}  // namespace ssnkit
