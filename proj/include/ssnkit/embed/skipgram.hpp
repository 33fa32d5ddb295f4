#pragma once

// Skip-gram with negative sampling over a walk corpus, plus the DeepWalk and
// Node2Vec front ends. For a (target t, context c) pair and negatives x the
// per-pair loss is
//   -log s(u_c . v_t) - sum_x log s(-u_x . v_t),   s = logistic sigmoid.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ssnkit/embed/types.hpp"
#include "ssnkit/embed/walks.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/random.hpp"

namespace ssnkit {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace detail {
// Eight independent partial sums so the reduction vectorizes; the fixed
// association order keeps results reproducible.
inline float dot8(const float* a, const float* b, std::size_t n) {
  float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t j = 0; j < 8; ++j) acc[j] += a[i + j] * b[i + j];
  for (; i < n; ++i) acc[0] += a[i] * b[i];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

inline double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }
}  // namespace detail

/// Pair loss; `negatives` holds one context vector per row.
inline double sgns_pair_loss(const Eigen::VectorXd& target, const Eigen::VectorXd& context,
                             const Eigen::MatrixXd& negatives) {
  double loss = -detail::log_sigmoid(context.dot(target));
  for (Eigen::Index r = 0; r < negatives.rows(); ++r)
    loss -= detail::log_sigmoid(-negatives.row(r).dot(target));
  return loss;
}

struct SgnsPairGradient {
  Eigen::VectorXd target;
  Eigen::VectorXd context;
  Eigen::MatrixXd negatives;
};

inline SgnsPairGradient sgns_pair_gradient(const Eigen::VectorXd& target, const Eigen::VectorXd& context,
                                           const Eigen::MatrixXd& negatives) {
  SgnsPairGradient g;
  const double gc = sigmoid(context.dot(target)) - 1.0;
  g.target = gc * context;
  g.context = gc * target;
  g.negatives.resize(negatives.rows(), negatives.cols());
  for (Eigen::Index r = 0; r < negatives.rows(); ++r) {
    const double gx = sigmoid(negatives.row(r).dot(target));
    g.target += gx * negatives.row(r).transpose();
    g.negatives.row(r) = gx * target.transpose();
  }
  return g;
}

/// Negative-sampling weights: corpus frequency^0.75 per node.
inline std::vector<double> negative_sampling_weights(const WalkCorpus& corpus, std::size_t n) {
  std::vector<double> w(n, 0.0);
  for (const auto& walk : corpus)
    for (int v : walk) w[static_cast<std::size_t>(v)] += 1.0;
  for (auto& x : w) x = std::pow(x, 0.75);
  return w;
}

/// Walker alias table: one uniform draw picks a node with probability
/// proportional to its weight in O(1).
class AliasSampler {
 public:
  explicit AliasSampler(const std::vector<double>& weights) : prob_(weights.size()), alias_(weights.size()) {
    const std::size_t n = weights.size();
    double total = 0.0;
    for (double w : weights) total += w;
    if (n == 0 || !(total > 0)) throw ConfigError("alias sampler needs a positive total weight");
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back(), l = large.back();
      small.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = static_cast<int>(l);
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::size_t i : large) prob_[i] = 1.0, alias_[i] = static_cast<int>(i);
    for (std::size_t i : small) prob_[i] = 1.0, alias_[i] = static_cast<int>(i);
  }

  int operator()(Rng& rng) const {
    const double x = uniform01(rng) * static_cast<double>(prob_.size());
    const auto i = std::min(static_cast<std::size_t>(x), prob_.size() - 1);
    return x - static_cast<double>(i) < prob_[i] ? static_cast<int>(i) : alias_[i];
  }

  /// Probability of drawing node i.
  double probability(std::size_t i) const {
    double p = prob_[i];
    for (std::size_t j = 0; j < prob_.size(); ++j)
      if (j != i && alias_[j] == static_cast<int>(i)) p += 1.0 - prob_[j];
    return p / static_cast<double>(prob_.size());
  }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

/// Trains target (v) and context (u) vectors for `epochs` passes over the
/// corpus with a linearly decaying learning rate, and returns the targets.
/// Targets start uniform in +-0.5/d, contexts at zero. Parameters are held
/// in single precision during training. Single-threaded, so the result is a
/// pure function of (corpus, n, d, config).
inline EmbeddingMatrix sgns_train(const WalkCorpus& corpus, std::size_t n, int d, const WalkConfig& cfg) {
  cfg.validate();
  if (d < 1) throw DimensionError("embedding dimension must be >= 1");
  std::size_t tokens = 0;
  for (const auto& w : corpus) tokens += w.size();
  if (tokens == 0) throw ConfigError("walk corpus is empty");

  const auto dim = static_cast<std::size_t>(d);
  Rng rng = make_rng(cfg.seed, 0x5a6e);
  std::vector<float> V(n * dim), U(n * dim, 0.0f);
  for (auto& x : V) x = static_cast<float>(uniform_real(rng, -0.5 / d, 0.5 / d));
  const AliasSampler negatives(negative_sampling_weights(corpus, n));

  std::vector<float> grad_v(dim);
  const double total_steps = static_cast<double>(tokens) * cfg.epochs;
  double processed = 0.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& walk : corpus) {
      for (std::size_t pos = 0; pos < walk.size(); ++pos) {
        const auto lr = static_cast<float>(cfg.learning_rate * std::max(1e-4, 1.0 - processed / total_steps));
        processed += 1.0;
        float* v = &V[static_cast<std::size_t>(walk[pos]) * dim];
        const std::size_t lo = pos >= static_cast<std::size_t>(cfg.window) ? pos - static_cast<std::size_t>(cfg.window) : 0;
        const std::size_t hi = std::min(walk.size() - 1, pos + static_cast<std::size_t>(cfg.window));
        for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
          if (cpos == pos) continue;
          const int ctx = walk[cpos];
          std::fill(grad_v.begin(), grad_v.end(), 0.0f);
          // Gradient-descent step on the pair loss; same coefficients as
          // sgns_pair_gradient.
          auto update = [&](int node, float label) {
            float* u = &U[static_cast<std::size_t>(node) * dim];
            const float coef = static_cast<float>(sigmoid(detail::dot8(u, v, dim))) - label;
            const float step = lr * coef;
            for (std::size_t c = 0; c < dim; ++c) {
              grad_v[c] += coef * u[c];
              u[c] -= step * v[c];
            }
          };
          update(ctx, 1.0f);
          for (int m = 0; m < cfg.negatives; ++m) {
            const int neg = negatives(rng);
            if (neg == ctx) continue;
            update(neg, 0.0f);
          }
          for (std::size_t c = 0; c < dim; ++c) v[c] -= lr * grad_v[c];
        }
      }
    }
  }

  EmbeddingMatrix out;
  out.method = "sgns";
  out.vectors.resize(static_cast<Eigen::Index>(n), d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) out.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = V[i * dim + c];
  return out;
}

/// Biased walks with the configured (p, q), then skip-gram training.
inline EmbeddingMatrix node2vec(const SimilarityNetwork& g, int d = kDefaultEmbeddingDim, const WalkConfig& cfg = {},
                                unsigned workers = 1) {
  const auto corpus = generate_walks(g, cfg, workers);
  auto out = sgns_train(corpus, g.size(), d, cfg);
  out.method = "node2vec";
  return out;
}

/// Node2Vec with p = q = 1 (uniform first-order walks).
inline EmbeddingMatrix deepwalk(const SimilarityNetwork& g, int d = kDefaultEmbeddingDim, WalkConfig cfg = {},
                                unsigned workers = 1) {
  cfg.p = 1.0;
  cfg.q = 1.0;
  auto out = node2vec(g, d, cfg, workers);
  out.method = "deepwalk";
  return out;
}

}  // namespace ssnkit
