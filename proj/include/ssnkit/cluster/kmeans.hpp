#pragma once

// k-means with k-means++ seeding; full-batch Lloyd iterations or mini-batch
// updates with per-center learning rates 1/count.

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ssnkit/cluster/types.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/random.hpp"

namespace ssnkit {

struct KMeansOptions {
  int max_iter = 300;
  double tol = 1e-6;
  /// Mini-batch size; full-batch Lloyd when absent.
  std::optional<int> batch_size;
  /// Independent restarts; the lowest final SSE wins.
  int n_init = 1;
};

struct KMeansResult {
  ClusterAssignment assignment;
  Eigen::MatrixXd centers;  // row c is the center of cluster label c
};

namespace detail {

inline Eigen::MatrixXd kmeans_plus_plus(const Eigen::MatrixXd& X, int k, Rng& rng) {
  const auto n = X.rows();
  Eigen::MatrixXd C(k, X.cols());
  C.row(0) = X.row(static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n))));
  Eigen::VectorXd best = (X.rowwise() - C.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = best.sum();
    Eigen::Index pick = 0;
    if (total > 0) {
      const double r = uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += best(i);
        if (acc > r && best(i) > 0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    }
    C.row(c) = X.row(pick);
    best = best.cwiseMin((X.rowwise() - C.row(c)).rowwise().squaredNorm());
  }
  return C;
}

/// Nearest center per row (lowest index on ties); returns the exact SSE.
inline double assign_nearest(const Eigen::MatrixXd& X, const Eigen::MatrixXd& C, std::vector<int>& labels) {
  const Eigen::MatrixXd D = squared_distances(X, C);
  labels.resize(static_cast<std::size_t>(X.rows()));
  double sse = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::Index arg;
    D.row(i).minCoeff(&arg);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    sse += (X.row(i) - C.row(arg)).squaredNorm();
  }
  return sse;
}

inline KMeansResult kmeans_single(const Eigen::MatrixXd& X, int k, Rng& rng, const KMeansOptions& opt) {
  const auto n = X.rows();
  Eigen::MatrixXd C = kmeans_plus_plus(X, k, rng);
  std::vector<int> labels;
  KMeansResult res;
  auto& hist = res.assignment.history;

  if (!opt.batch_size) {
    for (int it = 0; it < opt.max_iter; ++it) {
      hist.push_back(assign_nearest(X, C, labels));
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
      Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
      for (Eigen::Index i = 0; i < n; ++i) {
        sums.row(labels[static_cast<std::size_t>(i)]) += X.row(i);
        counts(labels[static_cast<std::size_t>(i)]) += 1.0;
      }
      double shift = 0.0;
      for (int c = 0; c < k; ++c) {
        if (counts(c) == 0) continue;  // empty cluster keeps its center
        const Eigen::RowVectorXd next = sums.row(c) / counts(c);
        shift = std::max(shift, (next - C.row(c)).norm());
        C.row(c) = next;
      }
      if (shift < opt.tol) break;
    }
  } else {
    const int batch = std::max(1, *opt.batch_size);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(batch));
    for (int it = 0; it < opt.max_iter; ++it) {
      for (auto& b : idx) b = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
      Eigen::MatrixXd sample(batch, X.cols());
      for (int b = 0; b < batch; ++b) sample.row(b) = X.row(idx[static_cast<std::size_t>(b)]);
      std::vector<int> near;
      assign_nearest(sample, C, near);
      const Eigen::MatrixXd before = C;
      for (int b = 0; b < batch; ++b) {
        const int c = near[static_cast<std::size_t>(b)];
        counts(c) += 1.0;
        C.row(c) += (sample.row(b) - C.row(c)) / counts(c);
      }
      hist.push_back(assign_nearest(X, C, labels));
      if ((C - before).rowwise().norm().maxCoeff() < opt.tol) break;
    }
  }
  const double sse = assign_nearest(X, C, labels);
  res.assignment.labels = labels;
  res.assignment.inertia = sse;
  res.centers = C;
  return res;
}

}  // namespace detail

/// Clusters the rows of X. Labels are renumbered by first occurrence and the
/// returned centers follow the same numbering.
inline KMeansResult kmeans_fit(const Eigen::MatrixXd& X, int k, std::uint64_t seed, const KMeansOptions& opt = {}) {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (k > X.rows())
    throw ConfigError("k = " + std::to_string(k) + " exceeds the number of points " + std::to_string(X.rows()));
  KMeansResult best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, opt.n_init); ++r) {
    Rng rng = make_rng(seed, 0x6b6d + static_cast<std::uint64_t>(r));
    auto res = detail::kmeans_single(X, k, rng, opt);
    if (*res.assignment.inertia < best_sse) {
      best_sse = *res.assignment.inertia;
      best = std::move(res);
    }
  }
  std::vector<int> raw = best.assignment.labels;
  best.assignment.k_found = canonicalize_labels(best.assignment.labels);
  Eigen::MatrixXd centers(best.assignment.k_found, X.cols());
  for (std::size_t i = 0; i < raw.size(); ++i) centers.row(best.assignment.labels[i]) = best.centers.row(raw[i]);
  best.centers = std::move(centers);
  return best;
}

inline ClusterAssignment kmeans(const Eigen::MatrixXd& X, int k, std::uint64_t seed, const KMeansOptions& opt = {}) {
  return kmeans_fit(X, k, seed, opt).assignment;
}

}  // namespace ssnkit
