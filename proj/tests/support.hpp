#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <vector>

#include "ssnkit/random.hpp"
#include "ssnkit/ssn.hpp"

namespace fixture {

/// Random spanning tree plus each remaining pair with probability `density`.
inline ssnkit::SimilarityNetwork random_connected_graph(ssnkit::Rng& rng, int n, double density) {
  std::vector<ssnkit::Edge> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(static_cast<int>(ssnkit::uniform_index(rng, static_cast<std::uint64_t>(v))), v);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (ssnkit::bernoulli(rng, density)) edges.emplace_back(u, v);
  return ssnkit::SimilarityNetwork(static_cast<std::size_t>(n), edges);
}

inline ssnkit::SimilarityNetwork path_graph(int n) {
  std::vector<ssnkit::Edge> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
  return ssnkit::SimilarityNetwork(static_cast<std::size_t>(n), edges);
}

inline ssnkit::SimilarityNetwork complete_graph(int n) {
  std::vector<ssnkit::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return ssnkit::SimilarityNetwork(static_cast<std::size_t>(n), edges);
}

/// Two m-cliques {0..m-1} and {m..2m-1} joined by the edge (m-1, m).
inline ssnkit::SimilarityNetwork barbell(int m) {
  std::vector<ssnkit::Edge> edges;
  for (int base : {0, m})
    for (int u = 0; u < m; ++u)
      for (int v = u + 1; v < m; ++v) edges.emplace_back(base + u, base + v);
  edges.emplace_back(m - 1, m);
  return ssnkit::SimilarityNetwork(static_cast<std::size_t>(2 * m), edges);
}

}  // namespace fixture
