#pragma once

// CART on Gini impurity and a bagged random forest built from it.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "ssnkit/classify/base.hpp"
#include "ssnkit/parallel.hpp"
#include "ssnkit/random.hpp"

namespace ssnkit {

struct TreeConfig {
  int max_depth = -1;  // -1: unlimited
  int min_leaf = 1;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  std::vector<double> class_freq;  // leaf only
};

namespace detail {

/// Grows a tree on the rows listed in `sample` (repeats allowed). When
/// `feature_frac` is set, each split considers a fresh seeded subset of
/// max(1, round(frac * p)) features; frac = 1 considers every feature without
/// touching the RNG.
class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& X, std::span<const int> y, int classes, const TreeConfig& cfg,
              std::optional<double> feature_frac, Rng* rng)
      : X_(X), y_(y), classes_(classes), cfg_(cfg), rng_(rng) {
    const auto p = static_cast<int>(X.cols());
    per_split_ = feature_frac ? std::clamp(static_cast<int>(std::lround(*feature_frac * p)), 1, p) : p;
    all_features_.resize(static_cast<std::size_t>(p));
    std::iota(all_features_.begin(), all_features_.end(), 0);
  }

  std::vector<TreeNode> build(std::vector<int> sample) {
    nodes_.clear();
    grow(sample, 0);
    return std::move(nodes_);
  }

 private:
  std::vector<double> counts(const std::vector<int>& rows) const {
    std::vector<double> c(static_cast<std::size_t>(classes_), 0.0);
    for (int r : rows) c[static_cast<std::size_t>(y_[static_cast<std::size_t>(r)])] += 1.0;
    return c;
  }

  std::vector<int> candidate_features() {
    if (per_split_ == static_cast<int>(all_features_.size())) return all_features_;
    std::vector<int> pool = all_features_;
    for (int t = 0; t < per_split_; ++t) {
      const auto j = static_cast<std::size_t>(t) + uniform_index(*rng_, pool.size() - static_cast<std::size_t>(t));
      std::swap(pool[static_cast<std::size_t>(t)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(per_split_));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  int grow(std::vector<int>& rows, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    auto freq = counts(rows);
    const double n = static_cast<double>(rows.size());
    int nonzero = 0;
    for (double c : freq) nonzero += c > 0 ? 1 : 0;
    const bool depth_left = cfg_.max_depth < 0 || depth < cfg_.max_depth;
    if (nonzero > 1 && depth_left && rows.size() >= 2 * static_cast<std::size_t>(cfg_.min_leaf)) {
      if (auto split = best_split(rows, freq)) {
        std::vector<int> left, right;
        for (int r : rows) (X_(r, split->first) <= split->second ? left : right).push_back(r);
        nodes_[static_cast<std::size_t>(id)].feature = split->first;
        nodes_[static_cast<std::size_t>(id)].threshold = split->second;
        std::vector<int>().swap(rows);
        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
      }
    }
    for (double& c : freq) c /= n;
    nodes_[static_cast<std::size_t>(id)].class_freq = std::move(freq);
    return id;
  }

  // Minimizes n_L * gini_L + n_R * gini_R; ties keep the earlier
  // (feature, threshold) pair.
  std::optional<std::pair<int, double>> best_split(const std::vector<int>& rows, const std::vector<double>& total) {
    const auto n = rows.size();
    const auto min_leaf = static_cast<std::size_t>(cfg_.min_leaf);
    std::optional<std::pair<int, double>> best;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> order(rows);
    std::vector<double> left(static_cast<std::size_t>(classes_));
    for (int f : candidate_features()) {
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return X_(a, f) < X_(b, f); });
      std::fill(left.begin(), left.end(), 0.0);
      double left_sq = 0.0;
      for (std::size_t t = 0; t + 1 < n; ++t) {
        const auto c = static_cast<std::size_t>(y_[static_cast<std::size_t>(order[t])]);
        left_sq += 2 * left[c] + 1;
        left[c] += 1.0;
        const double lo = X_(order[t], f), hi = X_(order[t + 1], f);
        if (lo == hi || t + 1 < min_leaf || n - t - 1 < min_leaf) continue;
        double right_sq = 0.0;
        for (std::size_t k = 0; k < left.size(); ++k) right_sq += (total[k] - left[k]) * (total[k] - left[k]);
        const double nl = static_cast<double>(t + 1), nr = static_cast<double>(n - t - 1);
        const double cost = (nl - left_sq / nl) + (nr - right_sq / nr);
        if (cost < best_cost - 1e-12) {
          best_cost = cost;
          double mid = 0.5 * (lo + hi);
          if (!(mid < hi)) mid = lo;
          best = std::pair{f, mid};
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& X_;
  std::span<const int> y_;
  int classes_;
  TreeConfig cfg_;
  Rng* rng_;
  int per_split_;
  std::vector<int> all_features_;
  std::vector<TreeNode> nodes_;
};

inline const std::vector<double>& tree_leaf(const std::vector<TreeNode>& nodes, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  int id = 0;
  while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
    const auto& node = nodes[static_cast<std::size_t>(id)];
    id = x(node.feature) <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(id)].class_freq;
}

inline int tree_depth(const std::vector<TreeNode>& nodes, int id = 0) {
  const auto& node = nodes[static_cast<std::size_t>(id)];
  if (node.feature < 0) return 0;
  return 1 + std::max(tree_depth(nodes, node.left), tree_depth(nodes, node.right));
}

}  // namespace detail

/// Scores are the class frequencies of the reached leaf.
class DecisionTree : public Classifier {
 public:
  explicit DecisionTree(TreeConfig cfg = {}) : cfg_(cfg) {
    if (cfg.min_leaf < 1 || cfg.max_depth < -1) throw ConfigError("decision_tree: invalid config");
  }
  std::string name() const override { return "decision_tree"; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const { return detail::tree_depth(nodes_); }

 protected:
  void fit_impl(const Eigen::MatrixXd& X, std::span<const int> y, int classes) override {
    std::vector<int> all(static_cast<std::size_t>(X.rows()));
    std::iota(all.begin(), all.end(), 0);
    nodes_ = detail::TreeBuilder(X, y, classes, cfg_, std::nullopt, nullptr).build(std::move(all));
  }

  Eigen::MatrixXd scores_impl(const Eigen::MatrixXd& X) const override {
    Eigen::MatrixXd S(X.rows(), num_classes());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const auto& f = detail::tree_leaf(nodes_, X.row(i));
      for (int c = 0; c < num_classes(); ++c) S(i, c) = f[static_cast<std::size_t>(c)];
    }
    return S;
  }

 private:
  TreeConfig cfg_;
  std::vector<TreeNode> nodes_;
};

struct ForestConfig {
  int n_trees = 100;
  TreeConfig tree{};
  /// Fraction of features tried per split; unset means sqrt(p) features.
  std::optional<double> feature_frac;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Tree t draws its bootstrap sample and feature subsets from stream t of
/// the seed. Scores average the trees' leaf frequencies.
class RandomForest : public Classifier {
 public:
  explicit RandomForest(ForestConfig cfg = {}) : cfg_(cfg) {
    if (cfg.n_trees < 1) throw ConfigError("random_forest: n_trees must be >= 1");
    if (cfg.feature_frac && !(*cfg.feature_frac > 0 && *cfg.feature_frac <= 1))
      throw ConfigError("random_forest: feature_frac must be in (0, 1]");
    if (cfg.tree.min_leaf < 1 || cfg.tree.max_depth < -1) throw ConfigError("random_forest: invalid tree config");
  }
  std::string name() const override { return "random_forest"; }
  const std::vector<std::vector<TreeNode>>& trees() const { return trees_; }

 protected:
  void fit_impl(const Eigen::MatrixXd& X, std::span<const int> y, int classes) override {
    const auto n = static_cast<std::size_t>(X.rows());
    const double frac =
        cfg_.feature_frac ? *cfg_.feature_frac : std::sqrt(static_cast<double>(X.cols())) / static_cast<double>(X.cols());
    trees_.assign(static_cast<std::size_t>(cfg_.n_trees), {});
    parallel_for(trees_.size(), cfg_.workers, [&](std::size_t t) {
      Rng rng = make_rng(cfg_.seed, t);
      std::vector<int> sample(n);
      if (cfg_.bootstrap)
        for (auto& s : sample) s = static_cast<int>(uniform_index(rng, n));
      else
        std::iota(sample.begin(), sample.end(), 0);
      trees_[t] = detail::TreeBuilder(X, y, classes, cfg_.tree, frac, &rng).build(std::move(sample));
    });
  }

  Eigen::MatrixXd scores_impl(const Eigen::MatrixXd& X) const override {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(X.rows(), num_classes());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (const auto& tree : trees_) {
        const auto& f = detail::tree_leaf(tree, X.row(i));
        for (int c = 0; c < num_classes(); ++c) S(i, c) += f[static_cast<std::size_t>(c)];
      }
    return S / static_cast<double>(trees_.size());
  }

 private:
  ForestConfig cfg_;
  std::vector<std::vector<TreeNode>> trees_;
};

}  // namespace ssnkit
