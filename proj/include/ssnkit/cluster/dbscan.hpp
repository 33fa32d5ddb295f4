#pragma once

#include <Eigen/Dense>
#include <deque>
#include <vector>

#include "ssnkit/cluster/types.hpp"
#include "ssnkit/errors.hpp"

namespace ssnkit {

/// Density clustering with Euclidean eps-neighborhoods (a point counts as its
/// own neighbor). Cores have >= min_pts neighbors; points reachable from no
/// core are labeled kNoise. Clusters are numbered in discovery order while
/// scanning points by ascending index.
inline ClusterAssignment dbscan(const Eigen::MatrixXd& X, double eps, int min_pts) {
  if (!(eps > 0)) throw ConfigError("eps must be > 0");
  if (min_pts < 1) throw ConfigError("min_pts must be >= 1");
  const auto n = X.rows();
  const Eigen::MatrixXd D = squared_distances(X, X);
  const double eps2 = eps * eps;
  std::vector<std::vector<Eigen::Index>> hood(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i == j || D(i, j) <= eps2) hood[static_cast<std::size_t>(i)].push_back(j);
  auto is_core = [&](Eigen::Index i) { return static_cast<int>(hood[static_cast<std::size_t>(i)].size()) >= min_pts; };

  constexpr int kUnvisited = -2;
  ClusterAssignment out;
  out.labels.assign(static_cast<std::size_t>(n), kUnvisited);
  int next = 0;
  std::deque<Eigen::Index> frontier;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (out.labels[static_cast<std::size_t>(s)] != kUnvisited) continue;
    if (!is_core(s)) {
      out.labels[static_cast<std::size_t>(s)] = kNoise;
      continue;
    }
    const int id = next++;
    out.labels[static_cast<std::size_t>(s)] = id;
    frontier.assign(1, s);
    while (!frontier.empty()) {
      const auto p = frontier.front();
      frontier.pop_front();
      if (!is_core(p)) continue;
      for (auto q : hood[static_cast<std::size_t>(p)]) {
        auto& lq = out.labels[static_cast<std::size_t>(q)];
        if (lq == kUnvisited || lq == kNoise) {
          const bool fresh = lq == kUnvisited;
          lq = id;
          if (fresh) frontier.push_back(q);
        }
      }
    }
  }
  out.k_found = next;
  return out;
}

}  // namespace ssnkit
