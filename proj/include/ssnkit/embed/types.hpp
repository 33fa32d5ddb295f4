#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace ssnkit {

/// n x d node embeddings aligned with graph node order.
struct EmbeddingMatrix {
  Eigen::MatrixXd vectors;
  std::string method;
  /// Spectral methods only: eigenvalue (ascending) behind each column.
  std::vector<double> eigenvalues;
  /// Extra facts worth serializing next to the vectors (e.g. fallbacks taken).
  std::map<std::string, std::string> notes;

  Eigen::Index rows() const { return vectors.rows(); }
  Eigen::Index dim() const { return vectors.cols(); }
  bool all_finite() const { return vectors.allFinite(); }
};

inline constexpr int kDefaultEmbeddingDim = 200;

}  // namespace ssnkit
