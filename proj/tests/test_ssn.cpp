#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "ssnkit/ssn.hpp"

using namespace ssnkit;

namespace {

// Builds a k=1 feature matrix (20 columns) from dense nonnegative counts.
FeatureMatrix matrix_from(const std::vector<std::vector<int>>& rows) {
  std::vector<FrequencyVector> out;
  for (const auto& r : rows) {
    std::vector<KmerCount> e;
    for (std::size_t c = 0; c < r.size(); ++c)
      if (r[c] > 0) e.push_back({c, static_cast<std::uint32_t>(r[c])});
    out.emplace_back(1, std::move(e));
  }
  return FeatureMatrix(1, std::move(out));
}

std::vector<std::vector<int>> random_rows(Rng& rng, std::size_t n, std::size_t cols, int max_count) {
  std::vector<std::vector<int>> rows(n, std::vector<int>(cols));
  for (auto& r : rows)
    for (auto& x : r) x = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(max_count) + 1));
  return rows;
}

std::vector<std::vector<double>> as_double(const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<double>> out;
  for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
  return out;
}

std::set<std::pair<int, int>> edge_set(const SimilarityNetwork& g) {
  const auto e = g.edges();
  return {e.begin(), e.end()};
}

}  // namespace

TEST(KnnQuery, OneDimensionalExample) {
  const auto fm = matrix_from({{0}, {1}, {3}});
  EXPECT_EQ(knn_query(fm, 2, 1), std::vector<int>{1});
}

TEST(KnnQuery, DuplicatesFindEachOther) {
  const auto fm = matrix_from({{5}, {0}, {5}});
  EXPECT_EQ(knn_query(fm, 0, 1), std::vector<int>{2});
  EXPECT_EQ(knn_query(fm, 2, 1), std::vector<int>{0});
}

TEST(KnnQuery, TiesGoToLowerIndex) {
  const auto fm = matrix_from({{0}, {2}, {1}, {0, 0}});
  // Row 2 is at distance 1 from every other row.
  EXPECT_EQ(knn_query(fm, 2, 1), std::vector<int>{0});
  EXPECT_EQ(knn_query(fm, 2, 3), (std::vector<int>{0, 1, 3}));
}

TEST(KnnQuery, NeighborCountBounds) {
  const auto fm = matrix_from({{0}, {1}, {3}});
  EXPECT_THROW(knn_query(fm, 0, 3), NeighborCountError);
  EXPECT_THROW(knn_query(fm, 0, 0), NeighborCountError);
}

TEST(BuildSsn, PathExample) {
  const auto g = build_ssn(matrix_from({{0}, {1}, {3}}), 1);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(BuildSsn, IdenticalRowsFollowTieRule) {
  // All distances are 0, so every list takes the two smallest other indices:
  // 0->{1,2}, 1->{0,2}, 2->{0,1}, 3->{0,1}, 4->{0,1}.
  const auto g = build_ssn(matrix_from({{4}, {4}, {4}, {4}, {4}}), 2);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}));
  EXPECT_EQ(edge_set(g), oracle::knn_edges(std::vector<std::vector<double>>(5, {4.0}), 2));
  EXPECT_EQ(g.min_degree(), 2u);
}

TEST(BuildSsn, MatchesOracleWithSymmetryAndMinDegree) {
  Rng rng = make_rng(1);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + uniform_index(rng, 80);
    const auto rows = random_rows(rng, n, 20, 3);
    const auto fm = matrix_from(rows);
    for (std::size_t K : {1ul, 5ul, 20ul}) {
      if (K >= n) continue;
      const auto g = build_ssn(fm, K);
      EXPECT_EQ(edge_set(g), oracle::knn_edges(as_double(rows), static_cast<int>(K)));
      EXPECT_GE(g.min_degree(), K);
      for (std::size_t u = 0; u < n; ++u)
        for (int v : g.neighbors(u)) {
          EXPECT_NE(v, static_cast<int>(u));
          EXPECT_TRUE(g.has_edge(v, static_cast<int>(u)));
        }
    }
  }
}

TEST(BuildSsn, MonotoneInK) {
  Rng rng = make_rng(2);
  const auto fm = matrix_from(random_rows(rng, 60, 20, 4));
  auto prev = edge_set(build_ssn(fm, 1));
  for (std::size_t K = 2; K < 20; ++K) {
    const auto cur = edge_set(build_ssn(fm, K));
    EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = cur;
  }
}

TEST(BuildSsn, WorkersDoNotChangeResult) {
  Rng rng = make_rng(3);
  const auto fm = matrix_from(random_rows(rng, 150, 20, 5));
  SsnOptions one, four;
  four.workers = 4;
  EXPECT_EQ(build_ssn(fm, 7, {}, {}, one), build_ssn(fm, 7, {}, {}, four));
}

TEST(BuildSsn, MutualIsSubsetOfUnion) {
  Rng rng = make_rng(4);
  const auto fm = matrix_from(random_rows(rng, 50, 20, 4));
  SsnOptions mutual;
  mutual.mutual = true;
  const auto u = edge_set(build_ssn(fm, 5));
  const auto m = edge_set(build_ssn(fm, 5, {}, {}, mutual));
  EXPECT_TRUE(std::includes(u.begin(), u.end(), m.begin(), m.end()));
  EXPECT_LT(m.size(), u.size());
}

TEST(Components, Examples) {
  EXPECT_EQ(connected_components(SimilarityNetwork(3, {{0, 1}, {1, 2}})), (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(connected_components(SimilarityNetwork(3, {})), (std::vector<int>{0, 1, 2}));
  const SimilarityNetwork two(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  EXPECT_EQ(connected_components(two), (std::vector<int>{0, 0, 0, 1, 1, 1}));
  EXPECT_FALSE(is_connected(two));
  EXPECT_EQ(largest_component(SimilarityNetwork(4, {{2, 3}, {1, 2}})), (std::vector<int>{1, 2, 3}));
}

TEST(Export, EdgeLinesAndNodeRows) {
  SimilarityNetwork g(3, {{1, 0}, {1, 2}});
  std::ostringstream e;
  write_edges(e, g);
  EXPECT_EQ(e.str(), "0\t1\n1\t2\n");
  g.set_labels({"A", "B", "A"});
  std::ostringstream n;
  write_nodes(n, g);
  EXPECT_EQ(n.str(), "index,id,label\n0,0,A\n1,1,B\n2,2,A\n");
}

TEST(Export, RoundTripThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "ssnkit_test_ssn";
  std::filesystem::create_directories(dir);
  SimilarityNetwork g(4, {{0, 1}, {2, 3}, {1, 3}});
  g.set_node_ids({"a", "b", "c", "d"});
  g.set_labels({"x", "y", "x", "y"});
  export_graph(g, dir / "g");
  EXPECT_EQ(import_graph(dir / "g"), g);
  std::filesystem::remove_all(dir);
}

TEST(Export, UnwritablePathIsIoError) {
  EXPECT_THROW(export_graph(SimilarityNetwork(2, {{0, 1}}), "/nonexistent/dir/g"), IoError);
}

TEST(Import, SchemaErrors) {
  std::istringstream edges("0\t5\n"), nodes("index,id,label\n0,a,\n1,b,\n");
  EXPECT_THROW(read_graph(edges, nodes), SchemaError);
  std::istringstream e2(""), n2("idx,id\n");
  EXPECT_THROW(read_graph(e2, n2), SchemaError);
}
