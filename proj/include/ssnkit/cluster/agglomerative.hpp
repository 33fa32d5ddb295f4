#pragma once

// Connectivity-constrained agglomerative clustering. Only clusters joined by
// at least one SSN edge may merge; among those the cheapest pair goes first.
// Cluster-to-cluster costs live in a dense matrix updated with the
// Lance-Williams recurrences:
//   ward:    cost = increase in error sum of squares,
//            seeded with |x_i - x_j|^2 / 2 for singletons;
//   average: cost = mean pairwise Euclidean distance.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ssnkit/cluster/types.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/ssn.hpp"

namespace ssnkit {

enum class Linkage { Ward, Average };

inline Linkage parse_linkage(const std::string& s) {
  if (s == "ward") return Linkage::Ward;
  if (s == "average") return Linkage::Average;
  throw ConfigError("unknown linkage '" + s + "' (expected ward or average)");
}

inline ClusterAssignment agglomerative(const Eigen::MatrixXd& X, const SimilarityNetwork& graph, int k,
                                       Linkage linkage = Linkage::Ward) {
  const auto n = static_cast<int>(X.rows());
  if (k < 1) throw ConfigError("k must be >= 1");
  if (k > n) throw ConfigError("k exceeds the number of points");
  if (graph.size() != static_cast<std::size_t>(n)) throw ConfigError("graph node count does not match feature rows");

  Eigen::MatrixXd cost = squared_distances(X, X);
  // Queue entries are matched by exact cost, so the matrix must be exactly
  // symmetric; the GEMM expansion alone is not.
  cost = (0.5 * (cost + cost.transpose())).eval();
  if (linkage == Linkage::Ward)
    cost *= 0.5;
  else
    cost = cost.cwiseSqrt();

  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    parent[static_cast<std::size_t>(i)] = i;
    for (int j : graph.neighbors(static_cast<std::size_t>(i))) adj[static_cast<std::size_t>(i)].insert(j);
  }

  using Entry = std::tuple<double, int, int>;  // (cost, lo, hi)
  std::set<Entry> queue;
  for (int i = 0; i < n; ++i)
    for (int j : adj[static_cast<std::size_t>(i)])
      if (i < j) queue.emplace(cost(i, j), i, j);

  ClusterAssignment out;
  int clusters = n;
  while (clusters > k) {
    int a, b;
    if (!queue.empty()) {
      std::tie(std::ignore, a, b) = *queue.begin();
    } else {
      // No SSN-connected pair left: fall back to the cheapest pair overall.
      double best = std::numeric_limits<double>::infinity();
      a = b = -1;
      for (int i = 0; i < n; ++i) {
        if (!active[static_cast<std::size_t>(i)]) continue;
        for (int j = i + 1; j < n; ++j)
          if (active[static_cast<std::size_t>(j)] && cost(i, j) < best) {
            best = cost(i, j);
            a = i;
            b = j;
          }
      }
      ++out.forced_merges;
    }

    for (int c : {a, b})
      for (int m : adj[static_cast<std::size_t>(c)]) queue.erase({cost(std::min(c, m), std::max(c, m)), std::min(c, m), std::max(c, m)});

    const double na = size[static_cast<std::size_t>(a)];
    const double nb = size[static_cast<std::size_t>(b)];
    for (int m = 0; m < n; ++m) {
      if (!active[static_cast<std::size_t>(m)] || m == a || m == b) continue;
      double merged;
      if (linkage == Linkage::Ward) {
        const double nm = size[static_cast<std::size_t>(m)];
        merged = ((nm + na) * cost(m, a) + (nm + nb) * cost(m, b) - nm * cost(a, b)) / (nm + na + nb);
      } else {
        merged = (na * cost(m, a) + nb * cost(m, b)) / (na + nb);
      }
      cost(m, a) = cost(a, m) = merged;
    }

    auto& na_set = adj[static_cast<std::size_t>(a)];
    for (int m : adj[static_cast<std::size_t>(b)]) {
      na_set.insert(m);
      adj[static_cast<std::size_t>(m)].erase(b);
      adj[static_cast<std::size_t>(m)].insert(a);
    }
    adj[static_cast<std::size_t>(b)].clear();
    na_set.erase(a);
    na_set.erase(b);
    for (int m : na_set) queue.emplace(cost(std::min(a, m), std::max(a, m)), std::min(a, m), std::max(a, m));

    size[static_cast<std::size_t>(a)] += size[static_cast<std::size_t>(b)];
    active[static_cast<std::size_t>(b)] = false;
    parent[static_cast<std::size_t>(b)] = a;
    --clusters;
  }

  out.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int r = i;
    while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
    out.labels[static_cast<std::size_t>(i)] = r;
  }
  out.k_found = canonicalize_labels(out.labels);
  out.inertia = within_cluster_sse(X, out.labels);
  return out;
}

}  // namespace ssnkit
