#pragma once

// Eigenvector embeddings: Laplacian Eigenmaps and a graph form of Locally
// Linear Embedding. Both use dense solvers and cost O(n^3).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "ssnkit/embed/types.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/ssn.hpp"

namespace ssnkit {

struct SpectralOptions {
  /// Embed only the largest connected component and leave every other row
  /// zero, instead of raising ConnectivityError.
  bool largest_component = false;
};

inline Eigen::MatrixXd adjacency_matrix(const SimilarityNetwork& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t u = 0; u < g.size(); ++u)
    for (int v : g.neighbors(u)) A(static_cast<Eigen::Index>(u), v) = 1.0;
  return A;
}

namespace detail {

/// Flips v so that its largest-magnitude entry (first one on ties) is positive.
inline void canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak - 1e-12 * std::max(1.0, peak)) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

inline void check_spectral_dim(std::size_t n, int d) {
  if (d < 1) throw DimensionError("embedding dimension must be >= 1");
  if (static_cast<std::size_t>(d) >= n)
    throw DimensionError("d = " + std::to_string(d) + " must be smaller than the node count " + std::to_string(n));
}

/// Runs `embed_connected` on the graph, or on its largest component when the
/// graph is disconnected and the options allow it.
template <class Fn>
EmbeddingMatrix spectral_dispatch(const SimilarityNetwork& g, int d, const SpectralOptions& opt,
                                  const std::string& method, Fn&& embed_connected) {
  if (is_connected(g)) {
    check_spectral_dim(g.size(), d);
    return embed_connected(g);
  }
  if (!opt.largest_component)
    throw ConnectivityError(method + " needs a connected graph; restrict to a component or enable largest_component");
  const auto nodes = largest_component(g);
  const auto sub = g.induced(nodes);
  check_spectral_dim(sub.size(), d);
  EmbeddingMatrix part = embed_connected(sub);
  EmbeddingMatrix full = part;
  full.vectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.size()), part.vectors.cols());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    full.vectors.row(nodes[i]) = part.vectors.row(static_cast<Eigen::Index>(i));
  full.notes["largest_component_only"] = "true";
  full.notes["embedded_nodes"] = std::to_string(nodes.size());
  return full;
}

}  // namespace detail

/// Solves L y = lambda D y (L = D - A) and keeps the eigenvectors of the d
/// smallest nonzero eigenvalues, each D-orthonormal (y' D y = 1).
inline EmbeddingMatrix laplacian_eigenmaps(const SimilarityNetwork& graph, int d,
                                           const SpectralOptions& opt = {}) {
  return detail::spectral_dispatch(graph, d, opt, "laplacian_eigenmaps", [d](const SimilarityNetwork& g) {
    const Eigen::MatrixXd A = adjacency_matrix(g);
    const Eigen::VectorXd deg = A.rowwise().sum();
    const Eigen::MatrixXd D = deg.asDiagonal();
    const Eigen::MatrixXd L = D - A;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, D);
    if (solver.info() != Eigen::Success) throw DimensionError("generalized eigensolver failed");
    EmbeddingMatrix out;
    out.method = "laplacian_eigenmaps";
    out.vectors.resize(A.rows(), d);
    // Connected: exactly one zero eigenvalue, the constant vector.
    for (int c = 0; c < d; ++c) {
      Eigen::VectorXd y = solver.eigenvectors().col(c + 1);
      y /= std::sqrt(y.dot(D * y));
      detail::canonical_sign(y);
      out.vectors.col(c) = y;
      out.eigenvalues.push_back(solver.eigenvalues()(c + 1));
    }
    return out;
  });
}

/// M = (I - W)'(I - W) for uniform reconstruction weights W = D^-1 A.
inline Eigen::MatrixXd lle_cost_matrix(const SimilarityNetwork& g) {
  const Eigen::MatrixXd A = adjacency_matrix(g);
  const Eigen::VectorXd deg = A.rowwise().sum();
  for (Eigen::Index i = 0; i < deg.size(); ++i)
    if (deg(i) == 0) throw ConnectivityError("lle needs every node to have a neighbor");
  const Eigen::MatrixXd W = deg.cwiseInverse().asDiagonal() * A;
  const Eigen::MatrixXd IW = Eigen::MatrixXd::Identity(A.rows(), A.cols()) - W;
  return IW.transpose() * IW;
}

/// Unit-norm eigenvectors of M for its d smallest nonzero eigenvalues.
inline EmbeddingMatrix lle_embed(const SimilarityNetwork& graph, int d, const SpectralOptions& opt = {}) {
  return detail::spectral_dispatch(graph, d, opt, "lle", [d](const SimilarityNetwork& g) {
    const Eigen::MatrixXd M = lle_cost_matrix(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    if (solver.info() != Eigen::Success) throw DimensionError("eigensolver failed");
    EmbeddingMatrix out;
    out.method = "lle";
    out.vectors.resize(M.rows(), d);
    for (int c = 0; c < d; ++c) {
      Eigen::VectorXd y = solver.eigenvectors().col(c + 1).normalized();
      detail::canonical_sign(y);
      out.vectors.col(c) = y;
      out.eigenvalues.push_back(solver.eigenvalues()(c + 1));
    }
    return out;
  });
}

}  // namespace ssnkit
