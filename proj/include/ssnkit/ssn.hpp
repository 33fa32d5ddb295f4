#pragma once

// Sequence similarity network: an undirected, unweighted K-nearest-neighbor
// graph over k-mer frequency vectors, built by exact brute-force search.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ssnkit/csv.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/featurize.hpp"
#include "ssnkit/parallel.hpp"

namespace ssnkit {

using Edge = std::pair<int, int>;

/// Simple undirected graph with sorted neighbor lists and per-node metadata.
class SimilarityNetwork {
 public:
  SimilarityNetwork() = default;

  /// Builds from an edge list; duplicates and orientation are normalized,
  /// self-loops are rejected.
  SimilarityNetwork(std::size_t n, const std::vector<Edge>& edges) : adjacency_(n) {
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
        throw SchemaError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
      if (u == v) throw SchemaError("self-loop on node " + std::to_string(u));
      adjacency_[static_cast<std::size_t>(u)].push_back(v);
      adjacency_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nb : adjacency_) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    node_ids_.resize(n);
    for (std::size_t i = 0; i < n; ++i) node_ids_[i] = std::to_string(i);
  }

  std::size_t size() const { return adjacency_.size(); }
  const std::vector<int>& neighbors(std::size_t u) const { return adjacency_[u]; }
  std::size_t degree(std::size_t u) const { return adjacency_[u].size(); }

  bool has_edge(int u, int v) const {
    const auto& nb = adjacency_[static_cast<std::size_t>(u)];
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& nb : adjacency_) m += nb.size();
    return m / 2;
  }

  /// Edges (u, v) with u < v, lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < adjacency_.size(); ++u)
      for (int v : adjacency_[u])
        if (static_cast<int>(u) < v) out.emplace_back(static_cast<int>(u), v);
    return out;
  }

  std::size_t min_degree() const {
    std::size_t d = adjacency_.empty() ? 0 : SIZE_MAX;
    for (const auto& nb : adjacency_) d = std::min(d, nb.size());
    return d;
  }

  const std::vector<std::string>& node_ids() const { return node_ids_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }

  void set_node_ids(std::vector<std::string> ids) {
    if (ids.size() != size()) throw SchemaError("node id count does not match graph size");
    node_ids_ = std::move(ids);
  }
  void set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != size()) throw SchemaError("label count does not match graph size");
    labels_ = std::move(labels);
  }

  /// Subgraph on `nodes` (given in ascending order), relabeled 0..m-1.
  SimilarityNetwork induced(const std::vector<int>& nodes) const {
    std::vector<int> remap(size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) remap[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
    std::vector<Edge> sub;
    for (auto [u, v] : edges())
      if (remap[static_cast<std::size_t>(u)] >= 0 && remap[static_cast<std::size_t>(v)] >= 0)
        sub.emplace_back(remap[static_cast<std::size_t>(u)], remap[static_cast<std::size_t>(v)]);
    SimilarityNetwork g(nodes.size(), sub);
    std::vector<std::string> ids, labels;
    for (int v : nodes) {
      ids.push_back(node_ids_[static_cast<std::size_t>(v)]);
      if (has_labels()) labels.push_back(labels_[static_cast<std::size_t>(v)]);
    }
    g.set_node_ids(std::move(ids));
    g.set_labels(std::move(labels));
    return g;
  }

  friend bool operator==(const SimilarityNetwork&, const SimilarityNetwork&) = default;

 private:
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::string> node_ids_;
  std::vector<std::string> labels_;
};

namespace detail {

struct Candidate {
  double dist;
  int index;
  bool operator<(const Candidate& o) const { return dist < o.dist || (dist == o.dist && index < o.index); }
};

/// Exact K nearest rows to row i by squared Euclidean distance computed as
/// |x_i|^2 + |x_j|^2 - 2<x_i, x_j>. Counts are integers, so every distance is
/// an exact integer in double precision and ties are genuine.
inline std::vector<int> knn_row(const FeatureMatrix& fm, const std::vector<double>& norms, std::size_t i,
                                std::size_t K, std::vector<double>& scratch) {
  const auto& xi = fm.row(i).entries();
  for (const auto& e : xi) scratch[e.rank] = e.count;
  std::vector<Candidate> cand;
  cand.reserve(fm.rows() - 1);
  for (std::size_t j = 0; j < fm.rows(); ++j) {
    if (j == i) continue;
    double d = 0.0;
    for (const auto& e : fm.row(j).entries()) d += scratch[e.rank] * e.count;
    cand.push_back({norms[i] + norms[j] - 2.0 * d, static_cast<int>(j)});
  }
  for (const auto& e : xi) scratch[e.rank] = 0.0;
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(K), cand.end());
  std::vector<int> out(K);
  for (std::size_t t = 0; t < K; ++t) out[t] = cand[t].index;
  return out;
}

inline std::vector<double> row_norms(const FeatureMatrix& fm) {
  std::vector<double> norms(fm.rows());
  for (std::size_t i = 0; i < fm.rows(); ++i) norms[i] = fm.row(i).squared_norm();
  return norms;
}

inline void check_neighbor_count(std::size_t n, std::size_t K) {
  if (K < 1) throw NeighborCountError("K must be >= 1");
  if (K >= n)
    throw NeighborCountError("K = " + std::to_string(K) + " requires more than " + std::to_string(K) +
                             " rows, got " + std::to_string(n));
}

}  // namespace detail

/// Indices of the K rows nearest to row i (excluding i), nearest first; equal
/// distances resolve to the smaller index.
inline std::vector<int> knn_query(const FeatureMatrix& fm, std::size_t i, std::size_t K) {
  detail::check_neighbor_count(fm.rows(), K);
  if (i >= fm.rows()) throw ConfigError("query index out of range");
  std::vector<double> scratch(fm.logical_length(), 0.0);
  return detail::knn_row(fm, detail::row_norms(fm), i, K, scratch);
}

struct SsnOptions {
  /// Keep only mutual neighbor relations instead of the union.
  bool mutual = false;
  unsigned workers = 1;
};

/// Directed KNN lists for every row, symmetrized into an undirected graph
/// (union by default, so every node keeps at least min(K, n-1) neighbors).
inline SimilarityNetwork build_ssn(const FeatureMatrix& fm, std::size_t K,
                                   std::vector<std::string> node_ids = {},
                                   std::vector<std::string> labels = {},
                                   const SsnOptions& opt = {}) {
  const std::size_t n = fm.rows();
  if (n < 2) throw NeighborCountError("an SSN needs at least two sequences");
  detail::check_neighbor_count(n, K);
  const auto norms = detail::row_norms(fm);
  std::vector<std::vector<int>> lists(n);
  constexpr std::size_t kTile = 64;
  const std::size_t tiles = (n + kTile - 1) / kTile;
  parallel_for(tiles, opt.workers, [&](std::size_t t) {
    std::vector<double> scratch(fm.logical_length(), 0.0);
    for (std::size_t i = t * kTile; i < std::min(n, (t + 1) * kTile); ++i)
      lists[i] = detail::knn_row(fm, norms, i, K, scratch);
  });

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (int v : lists[u]) {
      if (opt.mutual) {
        const auto& back = lists[static_cast<std::size_t>(v)];
        if (std::find(back.begin(), back.end(), static_cast<int>(u)) == back.end()) continue;
      }
      edges.emplace_back(std::min<int>(static_cast<int>(u), v), std::max<int>(static_cast<int>(u), v));
    }
  }
  SimilarityNetwork g(n, edges);
  if (!node_ids.empty()) g.set_node_ids(std::move(node_ids));
  g.set_labels(std::move(labels));
  return g;
}

/// Component id per node, dense 0..c-1 in order of each component's smallest
/// node index.
inline std::vector<int> connected_components(const SimilarityNetwork& g) {
  std::vector<int> comp(g.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.assign(1, static_cast<int>(s));
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : g.neighbors(static_cast<std::size_t>(u)))
        if (comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  return comp;
}

inline bool is_connected(const SimilarityNetwork& g) {
  const auto comp = connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

/// Nodes of the largest component (ties: lowest component id), ascending.
inline std::vector<int> largest_component(const SimilarityNetwork& g) {
  const auto comp = connected_components(g);
  const int c = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(c), 0);
  for (int id : comp) ++sizes[static_cast<std::size_t>(id)];
  const auto best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<int> nodes;
  for (std::size_t i = 0; i < comp.size(); ++i)
    if (comp[i] == best) nodes.push_back(static_cast<int>(i));
  return nodes;
}

// Interchange format: "<prefix>.edges.tsv" holds "u\tv" lines with u < v;
// "<prefix>.nodes.csv" holds "index,id,label" with one row per node.

inline std::filesystem::path edges_path(const std::filesystem::path& prefix) {
  return prefix.string() + ".edges.tsv";
}
inline std::filesystem::path nodes_path(const std::filesystem::path& prefix) {
  return prefix.string() + ".nodes.csv";
}

inline void write_edges(std::ostream& out, const SimilarityNetwork& g) {
  for (auto [u, v] : g.edges()) out << u << '\t' << v << '\n';
}

inline void write_nodes(std::ostream& out, const SimilarityNetwork& g) {
  out << "index,id,label\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    out << i << ',' << g.node_ids()[i] << ',' << (g.has_labels() ? g.labels()[i] : std::string()) << '\n';
}

inline void export_graph(const SimilarityNetwork& g, const std::filesystem::path& prefix) {
  {
    auto out = csv::open_output(edges_path(prefix));
    write_edges(out, g);
    if (!out) throw IoError("write failed for '" + edges_path(prefix).string() + "'");
  }
  auto out = csv::open_output(nodes_path(prefix));
  write_nodes(out, g);
  if (!out) throw IoError("write failed for '" + nodes_path(prefix).string() + "'");
}

inline SimilarityNetwork read_graph(std::istream& edges_in, std::istream& nodes_in) {
  std::string line;
  if (!std::getline(nodes_in, line) || csv::strip_cr(line) != "index,id,label")
    throw SchemaError("node file must start with 'index,id,label'");
  std::vector<std::string> ids, labels;
  bool any_label = false;
  std::size_t line_no = 1;
  while (std::getline(nodes_in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto f = csv::split(line);
    const auto ctx = "nodes line " + std::to_string(line_no);
    if (f.size() != 3) throw SchemaError(ctx + ": expected index,id,label");
    if (csv::parse_number<std::size_t>(f[0], ctx) != ids.size()) throw SchemaError(ctx + ": indices must be 0..n-1 in order");
    ids.emplace_back(f[1]);
    labels.emplace_back(f[2]);
    any_label = any_label || !f[2].empty();
  }
  std::vector<Edge> edges;
  line_no = 0;
  while (std::getline(edges_in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto f = csv::split(line, '\t');
    const auto ctx = "edges line " + std::to_string(line_no);
    if (f.size() != 2) throw SchemaError(ctx + ": expected 'u<TAB>v'");
    edges.emplace_back(csv::parse_number<int>(f[0], ctx), csv::parse_number<int>(f[1], ctx));
  }
  SimilarityNetwork g(ids.size(), edges);
  g.set_node_ids(std::move(ids));
  if (any_label) g.set_labels(std::move(labels));
  return g;
}

inline SimilarityNetwork import_graph(const std::filesystem::path& prefix) {
  auto e = csv::open_input(edges_path(prefix));
  auto n = csv::open_input(nodes_path(prefix));
  return read_graph(e, n);
}

}  // namespace ssnkit
