#pragma once

// Internal clustering indices. Noise points (label kNoise) are ignored by all
// three scores.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "ssnkit/cluster/types.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/parallel.hpp"

namespace ssnkit {

/// Calinski-Harabasz value reported when every cluster has zero spread.
inline constexpr double kUnboundedScore = std::numeric_limits<double>::infinity();

struct ClusterQualityReport {
  double silhouette = 0.0;
  double calinski_harabasz = 0.0;
  double davies_bouldin = 0.0;
  double runtime_sec = 0.0;
};

namespace detail {

struct Grouping {
  std::vector<Eigen::Index> rows;    // non-noise row indices
  std::vector<int> cluster;          // dense cluster id per entry of rows
  int k = 0;
  std::vector<double> counts;
};

inline Grouping group_rows(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
  if (labels.size() != static_cast<std::size_t>(X.rows())) throw ConfigError("label count does not match rows");
  Grouping g;
  std::map<int, int> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoise) continue;
    ids.emplace(labels[i], 0);
  }
  for (auto& [label, id] : ids) id = g.k++;
  g.counts.assign(static_cast<std::size_t>(g.k), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoise) continue;
    g.rows.push_back(static_cast<Eigen::Index>(i));
    const int c = ids[labels[i]];
    g.cluster.push_back(c);
    g.counts[static_cast<std::size_t>(c)] += 1.0;
  }
  return g;
}

inline Eigen::MatrixXd centroids(const Eigen::MatrixXd& X, const Grouping& g) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(g.k, X.cols());
  for (std::size_t t = 0; t < g.rows.size(); ++t) C.row(g.cluster[t]) += X.row(g.rows[t]);
  for (int c = 0; c < g.k; ++c) C.row(c) /= g.counts[static_cast<std::size_t>(c)];
  return C;
}

}  // namespace detail

/// Mean over points of (b - a) / max(a, b), with a the mean distance to the
/// rest of the point's own cluster and b the smallest mean distance to
/// another cluster. Points in singleton clusters, or with a = b = 0, score 0.
inline double silhouette(const Eigen::MatrixXd& X, const std::vector<int>& labels, unsigned workers = 1) {
  const auto g = detail::group_rows(X, labels);
  if (g.k < 2) throw UndefinedMetricError("silhouette needs at least two clusters");
  const std::size_t m = g.rows.size();
  std::vector<double> score(m, 0.0);
  parallel_for(m, workers, [&](std::size_t t) {
    std::vector<double> sum(static_cast<std::size_t>(g.k), 0.0);
    const auto xi = X.row(g.rows[t]);
    for (std::size_t u = 0; u < m; ++u) {
      if (u == t) continue;
      sum[static_cast<std::size_t>(g.cluster[u])] += (xi - X.row(g.rows[u])).norm();
    }
    const auto own = static_cast<std::size_t>(g.cluster[t]);
    if (g.counts[own] <= 1.0) return;
    const double a = sum[own] / (g.counts[own] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sum.size(); ++c)
      if (c != own) b = std::min(b, sum[c] / g.counts[c]);
    const double denom = std::max(a, b);
    score[t] = denom > 0 ? (b - a) / denom : 0.0;
  });
  double total = 0.0;
  for (double s : score) total += s;
  return total / static_cast<double>(m);
}

/// [between dispersion / (k - 1)] / [within dispersion / (n - k)];
/// kUnboundedScore when the within dispersion is zero.
inline double calinski_harabasz(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
  const auto g = detail::group_rows(X, labels);
  const auto n = static_cast<double>(g.rows.size());
  if (g.k < 2 || g.k >= static_cast<int>(g.rows.size()))
    throw UndefinedMetricError("calinski_harabasz needs 2 <= k < n");
  const Eigen::MatrixXd C = detail::centroids(X, g);
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(X.cols());
  for (auto r : g.rows) mu += X.row(r);
  mu /= n;
  double between = 0.0, within = 0.0;
  for (int c = 0; c < g.k; ++c) between += g.counts[static_cast<std::size_t>(c)] * (C.row(c) - mu).squaredNorm();
  for (std::size_t t = 0; t < g.rows.size(); ++t) within += (X.row(g.rows[t]) - C.row(g.cluster[t])).squaredNorm();
  if (within == 0.0) return kUnboundedScore;
  return (between / (g.k - 1)) / (within / (n - g.k));
}

/// Mean over clusters of the worst (S_c + S_c') / M_cc', with S the mean
/// distance to the centroid and M the centroid separation.
inline double davies_bouldin(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
  const auto g = detail::group_rows(X, labels);
  if (g.k < 2) throw UndefinedMetricError("davies_bouldin needs at least two clusters");
  const Eigen::MatrixXd C = detail::centroids(X, g);
  std::vector<double> spread(static_cast<std::size_t>(g.k), 0.0);
  for (std::size_t t = 0; t < g.rows.size(); ++t)
    spread[static_cast<std::size_t>(g.cluster[t])] += (X.row(g.rows[t]) - C.row(g.cluster[t])).norm();
  for (int c = 0; c < g.k; ++c) spread[static_cast<std::size_t>(c)] /= g.counts[static_cast<std::size_t>(c)];
  double total = 0.0;
  for (int c = 0; c < g.k; ++c) {
    double worst = 0.0;
    for (int o = 0; o < g.k; ++o) {
      if (o == c) continue;
      const double sep = (C.row(c) - C.row(o)).norm();
      if (sep == 0.0) throw UndefinedMetricError("davies_bouldin is undefined for coincident centroids");
      worst = std::max(worst, (spread[static_cast<std::size_t>(c)] + spread[static_cast<std::size_t>(o)]) / sep);
    }
    total += worst;
  }
  return total / g.k;
}

}  // namespace ssnkit
