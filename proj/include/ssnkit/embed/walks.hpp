#pragma once

// Second-order biased random walks. From node `cur` reached via `prev`, a
// neighbor x is drawn with weight 1/p if x == prev, 1 if x is adjacent to
// prev, and 1/q otherwise; p = q = 1 is the uniform first-order walk.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ssnkit/errors.hpp"
#include "ssnkit/parallel.hpp"
#include "ssnkit/random.hpp"
#include "ssnkit/ssn.hpp"

namespace ssnkit {

struct WalkConfig {
  int walks_per_node = 10;
  int walk_length = 80;
  double p = 1.0;
  double q = 1.0;
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 0;

  void validate() const {
    if (walks_per_node < 1 || walk_length < 1 || window < 1 || negatives < 1 || epochs < 1)
      throw ConfigError("walk counts (walks_per_node, walk_length, window, negatives, epochs) must be >= 1");
    if (!(p > 0) || !(q > 0) || !(learning_rate > 0))
      throw ConfigError("p, q and learning_rate must be > 0");
  }
};

using Walk = std::vector<int>;
using WalkCorpus = std::vector<Walk>;

namespace detail {

inline int next_step(const SimilarityNetwork& g, int prev, int cur, double p, double q, Rng& rng,
                     std::vector<double>& weights) {
  const auto& nb = g.neighbors(static_cast<std::size_t>(cur));
  if (prev < 0 || (p == 1.0 && q == 1.0))
    return nb[uniform_index(rng, nb.size())];
  weights.resize(nb.size());
  double total = 0.0;
  for (std::size_t t = 0; t < nb.size(); ++t) {
    const int x = nb[t];
    const double w = x == prev ? 1.0 / p : (g.has_edge(prev, x) ? 1.0 : 1.0 / q);
    total += w;
    weights[t] = total;
  }
  const double r = uniform01(rng) * total;
  const auto it = std::upper_bound(weights.begin(), weights.end(), r);
  return nb[std::min<std::size_t>(static_cast<std::size_t>(it - weights.begin()), nb.size() - 1)];
}

}  // namespace detail

/// One walk of at most `length` nodes from `root`, stopping early at a node
/// without neighbors.
inline Walk random_walk(const SimilarityNetwork& g, int root, int length, double p, double q, Rng& rng) {
  Walk walk{root};
  std::vector<double> weights;
  while (static_cast<int>(walk.size()) < length) {
    const int cur = walk.back();
    if (g.degree(static_cast<std::size_t>(cur)) == 0) break;
    const int prev = walk.size() >= 2 ? walk[walk.size() - 2] : -1;
    walk.push_back(detail::next_step(g, prev, cur, p, q, rng, weights));
  }
  return walk;
}

/// walks_per_node rounds; each round visits every node once in a seeded
/// shuffled order. Every walk draws from its own RNG stream keyed by
/// (seed, round, root), so the corpus does not depend on `workers`.
inline WalkCorpus generate_walks(const SimilarityNetwork& g, const WalkConfig& cfg, unsigned workers = 1) {
  cfg.validate();
  const std::size_t n = g.size();
  const auto rounds = static_cast<std::size_t>(cfg.walks_per_node);
  std::vector<int> roots(n * rounds);
  Rng order_rng = make_rng(cfg.seed, 0x77a1);
  for (std::size_t r = 0; r < rounds; ++r) {
    auto first = roots.begin() + static_cast<std::ptrdiff_t>(r * n);
    std::iota(first, first + static_cast<std::ptrdiff_t>(n), 0);
    shuffle(first, first + static_cast<std::ptrdiff_t>(n), order_rng);
  }
  WalkCorpus corpus(roots.size());
  parallel_for(roots.size(), workers, [&](std::size_t w) {
    const std::size_t round = w / std::max<std::size_t>(n, 1);
    Rng rng = make_rng(mix_seed(cfg.seed, round), static_cast<std::uint64_t>(roots[w]));
    corpus[w] = random_walk(g, roots[w], cfg.walk_length, cfg.p, cfg.q, rng);
  });
  return corpus;
}

}  // namespace ssnkit
