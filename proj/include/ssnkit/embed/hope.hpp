#pragma once

// HOPE: factorize the Katz proximity S = (I - beta A)^-1 beta A with a
// truncated SVD, S ~ U_s V_t', where U_s = U sqrt(Sigma), V_t = V sqrt(Sigma).

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <optional>
#include <string>

#include "ssnkit/embed/spectral.hpp"
#include "ssnkit/embed/types.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/ssn.hpp"

namespace ssnkit {

/// Largest eigenvalue of the (nonnegative, symmetric) adjacency matrix by
/// power iteration on A + I, which has a unique dominant eigenvalue even for
/// bipartite graphs.
inline double spectral_radius(const Eigen::MatrixXd& A, int iterations = 100) {
  const auto n = A.rows();
  if (n == 0 || A.isZero(0.0)) return 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd y = A * x + x;
    x = y.normalized();
  }
  return x.dot(A * x);
}

inline Eigen::MatrixXd katz_proximity(const Eigen::MatrixXd& A, double beta) {
  const auto n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  return (I - beta * A).partialPivLu().solve(beta * A);
}

struct HopeResult {
  EmbeddingMatrix embedding;
  double beta = 0.0;
  Eigen::MatrixXd source;  // U sqrt(Sigma)
  Eigen::MatrixXd target;  // V sqrt(Sigma)
  Eigen::VectorXd singular_values;  // full spectrum of S, descending
};

/// beta defaults to 0.5 / rho(A). d must be even: the first d/2 columns are
/// source vectors, the rest target vectors. Ranks beyond n are zero-padded.
inline HopeResult hope_factorize(const SimilarityNetwork& g, int d, std::optional<double> beta = std::nullopt) {
  if (d < 2 || d % 2 != 0) throw DimensionError("hope needs an even dimension >= 2, got " + std::to_string(d));
  const Eigen::MatrixXd A = adjacency_matrix(g);
  const double rho = spectral_radius(A);
  HopeResult res;
  res.beta = beta.value_or(rho > 0 ? 0.5 / rho : 0.0);
  if (res.beta < 0) throw ConfigError("hope beta must be nonnegative");
  if (res.beta * rho >= 1.0)
    throw DivergenceError("Katz series diverges: beta * rho(A) = " + std::to_string(res.beta * rho) + " >= 1");

  const auto n = A.rows();
  const int half = d / 2;
  const Eigen::MatrixXd S = katz_proximity(A, res.beta);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  res.singular_values = svd.singularValues();
  res.source = Eigen::MatrixXd::Zero(n, half);
  res.target = Eigen::MatrixXd::Zero(n, half);
  const int rank = static_cast<int>(std::min<Eigen::Index>(half, n));
  for (int c = 0; c < rank; ++c) {
    const double s = svd.singularValues()(c);
    if (s <= 0.0) continue;
    Eigen::VectorXd u = svd.matrixU().col(c);
    Eigen::VectorXd v = svd.matrixV().col(c);
    const Eigen::VectorXd before = u;
    detail::canonical_sign(u);
    if (u.dot(before) < 0) v = -v;
    res.source.col(c) = u * std::sqrt(s);
    res.target.col(c) = v * std::sqrt(s);
  }
  res.embedding.method = "hope";
  res.embedding.vectors.resize(n, d);
  res.embedding.vectors << res.source, res.target;
  res.embedding.notes["beta"] = std::to_string(res.beta);
  return res;
}

inline EmbeddingMatrix hope_embed(const SimilarityNetwork& g, int d, std::optional<double> beta = std::nullopt) {
  return hope_factorize(g, d, beta).embedding;
}

}  // namespace ssnkit
