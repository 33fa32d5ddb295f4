#pragma once

// Graph Factorization: SGD on
//   f(Y) = 1/2 sum_{(i,j) in E} (A_ij - <y_i, y_j>)^2 + lambda/2 sum_i |y_i|^2
// where each undirected edge appears once in E.

#include <Eigen/Dense>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ssnkit/embed/types.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/random.hpp"
#include "ssnkit/ssn.hpp"

namespace ssnkit {

struct GfConfig {
  double lambda = 1e-4;
  double learning_rate = 0.02;
  int epochs = 100;
  std::uint64_t seed = 0;
};

inline double gf_objective(const SimilarityNetwork& g, const Eigen::MatrixXd& Y, double lambda) {
  double loss = 0.0;
  for (auto [i, j] : g.edges()) {
    const double r = 1.0 - Y.row(i).dot(Y.row(j));
    loss += 0.5 * r * r;
  }
  return loss + 0.5 * lambda * Y.squaredNorm();
}

inline Eigen::MatrixXd gf_gradient(const SimilarityNetwork& g, const Eigen::MatrixXd& Y, double lambda) {
  Eigen::MatrixXd grad = lambda * Y;
  for (auto [i, j] : g.edges()) {
    const double r = 1.0 - Y.row(i).dot(Y.row(j));
    grad.row(i) -= r * Y.row(j);
    grad.row(j) -= r * Y.row(i);
  }
  return grad;
}

struct GfTrace {
  std::vector<double> objective;  // after each epoch
};

/// Each epoch visits the edges in a fresh seeded order. An edge step moves
/// both endpoints along the negative gradient of its residual term plus the
/// endpoints' share of the L2 penalty.
inline EmbeddingMatrix graph_factorization(const SimilarityNetwork& g, int d, const GfConfig& cfg = {},
                                           GfTrace* trace = nullptr) {
  if (d < 1) throw DimensionError("embedding dimension must be >= 1");
  if (cfg.lambda < 0 || cfg.learning_rate < 0) throw ConfigError("gf lambda and learning rate must be >= 0");
  if (cfg.epochs < 0) throw ConfigError("gf epochs must be >= 0");
  const auto n = static_cast<Eigen::Index>(g.size());
  Rng rng = make_rng(cfg.seed, 0x6f);
  Eigen::MatrixXd Y(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index c = 0; c < d; ++c) Y(i, c) = uniform_real(rng, -0.1, 0.1);

  auto edges = g.edges();
  Eigen::VectorXd yi(d);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(edges.begin(), edges.end(), rng);
    for (auto [i, j] : edges) {
      const double r = 1.0 - Y.row(i).dot(Y.row(j));
      yi = Y.row(i).transpose();
      Y.row(i) += cfg.learning_rate * (r * Y.row(j) - cfg.lambda * Y.row(i));
      Y.row(j) += cfg.learning_rate * (r * yi.transpose() - cfg.lambda * Y.row(j));
    }
    if (trace) trace->objective.push_back(gf_objective(g, Y, cfg.lambda));
  }
  EmbeddingMatrix out;
  out.method = "graph_factorization";
  out.vectors = std::move(Y);
  return out;
}

}  // namespace ssnkit
