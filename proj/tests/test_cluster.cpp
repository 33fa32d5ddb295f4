#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ssnkit/cluster.hpp"
#include "support.hpp"

using namespace ssnkit;

namespace {

Eigen::MatrixXd column(std::initializer_list<double> xs) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) X(i++, 0) = x;
  return X;
}

std::vector<Eigen::VectorXd> corner_centers(int k, int dim, double scale) {
  std::vector<Eigen::VectorXd> c;
  for (int i = 0; i < k; ++i) c.push_back(scale * Eigen::VectorXd::Unit(dim, i));
  return c;
}

}  // namespace

TEST(KMeans, KEqualsNGivesZeroSse) {
  const auto X = column({3, 1, 4, 1.5, 9});
  const auto a = kmeans(X, 5, 0);
  EXPECT_EQ(a.k_found, 5);
  EXPECT_NEAR(*a.inertia, 0.0, 1e-12);
}

TEST(KMeans, TwoOneDimensionalBlobs) {
  const auto a = kmeans(column({0, 1, 10, 11}), 2, 0);
  EXPECT_EQ(a.labels, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_NEAR(*a.inertia, 1.0, 1e-12);
}

TEST(KMeans, SseMonotonePerIteration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [X, y] = oracle::blobs(corner_centers(5, 6, 3.0), 40, 1.0, seed);
    const auto a = kmeans(X, 5, seed);
    ASSERT_FALSE(a.history.empty());
    for (std::size_t i = 1; i < a.history.size(); ++i)
      EXPECT_LE(a.history[i], a.history[i - 1] * (1 + 1e-12) + 1e-12);
  }
}

TEST(KMeans, MiniBatchProducesValidLabels) {
  const auto [X, y] = oracle::blobs(corner_centers(3, 4, 20.0), 50, 1.0, 2);
  KMeansOptions opt;
  opt.batch_size = 32;
  opt.n_init = 3;
  const auto a = kmeans(X, 3, 1, opt);
  EXPECT_EQ(a.k_found, 3);
  EXPECT_TRUE(oracle::same_partition(a.labels, y));
}

TEST(KMeans, PermutationEquivariantOnSeparatedData) {
  const auto [X, y] = oracle::blobs(corner_centers(4, 4, 30.0), 25, 1.0, 5);
  std::vector<int> perm(static_cast<std::size_t>(X.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = make_rng(1);
  shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd P(X.rows(), X.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) P.row(static_cast<Eigen::Index>(i)) = X.row(perm[i]);
  KMeansOptions opt;
  opt.n_init = 10;
  const auto a = kmeans(X, 4, 0, opt);
  const auto b = kmeans(P, 4, 0, opt);
  std::vector<int> back(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) back[static_cast<std::size_t>(perm[i])] = b.labels[i];
  EXPECT_TRUE(oracle::same_partition(a.labels, back));
}

TEST(KMeans, Errors) {
  EXPECT_THROW(kmeans(column({1, 2}), 3, 0), ConfigError);
  EXPECT_THROW(kmeans(column({1, 2}), 0, 0), ConfigError);
}

TEST(Agglomerative, WardFourPoints) {
  const auto X = column({0, 1, 10, 11});
  const auto a = agglomerative(X, fixture::complete_graph(4), 2, Linkage::Ward);
  EXPECT_EQ(a.labels, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(a.forced_merges, 0);
  const auto b = agglomerative(X, fixture::complete_graph(4), 2, Linkage::Average);
  EXPECT_EQ(b.labels, a.labels);
}

TEST(Agglomerative, KEqualsNGivesSingletons) {
  const auto a = agglomerative(column({0, 1, 2}), fixture::path_graph(3), 3);
  EXPECT_EQ(a.labels, (std::vector<int>{0, 1, 2}));
}

TEST(Agglomerative, ConnectivityConstrainsMerges) {
  // 0 and 2 coincide but are only linked through 1.
  const auto X = column({0, 5, 0});
  const auto a = agglomerative(X, fixture::path_graph(3), 2, Linkage::Average);
  EXPECT_EQ(a.labels[0] == a.labels[2], false);
}

TEST(Agglomerative, DisconnectedGraphForcesMerges) {
  const auto X = column({0, 1, 10, 11});
  const SimilarityNetwork g(4, {{0, 1}, {2, 3}});
  const auto a = agglomerative(X, g, 1);
  EXPECT_EQ(a.forced_merges, 1);
  EXPECT_EQ(a.k_found, 1);
  const auto b = agglomerative(X, g, 2);
  EXPECT_EQ(b.forced_merges, 0);
  EXPECT_EQ(b.labels, (std::vector<int>{0, 0, 1, 1}));
}

TEST(Agglomerative, RecoversBlobsOnKnnGraph) {
  const auto [X, y] = oracle::blobs(corner_centers(4, 5, 20.0), 30, 1.0, 9);
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    std::vector<std::pair<double, int>> d;
    for (Eigen::Index j = 0; j < X.rows(); ++j)
      if (j != i) d.emplace_back((X.row(i) - X.row(j)).squaredNorm(), static_cast<int>(j));
    std::sort(d.begin(), d.end());
    for (int t = 0; t < 5; ++t) edges.emplace_back(static_cast<int>(i), d[static_cast<std::size_t>(t)].second);
  }
  const SimilarityNetwork g(static_cast<std::size_t>(X.rows()), edges);
  for (auto linkage : {Linkage::Ward, Linkage::Average})
    EXPECT_TRUE(oracle::same_partition(agglomerative(X, g, 4, linkage).labels, y));
}

TEST(Dbscan, TwoTriples) {
  const auto X = column({0, 1, 2, 22, 23, 24});
  const auto a = dbscan(X, 2, 2);
  EXPECT_EQ(a.labels, (std::vector<int>{0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(a.k_found, 2);
}

TEST(Dbscan, NoiseAndLargeEps) {
  const auto X = column({0, 1, 2, 100});
  EXPECT_EQ(dbscan(X, 2, 2).labels[3], kNoise);
  const auto all = dbscan(X, 1e9, 2);
  EXPECT_EQ(all.labels, (std::vector<int>{0, 0, 0, 0}));
}

TEST(Dbscan, OrderIndependentUpToRelabel) {
  const auto [X, y] = oracle::blobs(corner_centers(3, 2, 10.0), 30, 0.7, 4);
  Eigen::MatrixXd R = X.colwise().reverse();
  const auto a = dbscan(X, 1.5, 4).labels;
  auto b = dbscan(R, 1.5, 4).labels;
  std::reverse(b.begin(), b.end());
  EXPECT_TRUE(oracle::same_partition(a, b));
}

TEST(Gmm, SingleComponentIsSampleMean) {
  const auto [X, y] = oracle::blobs(corner_centers(1, 3, 5.0), 50, 2.0, 3);
  const auto r = fit_gaussian_mixture(X, 1, 0);
  EXPECT_LT((r.means.row(0) - X.colwise().mean()).norm(), 1e-10);
  for (int l : r.assignment.labels) EXPECT_EQ(l, 0);
}

TEST(Gmm, LogLikelihoodMonotone) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [X, y] = oracle::blobs(corner_centers(3, 4, 4.0), 40, 1.0, seed);
    const auto a = gaussian_mixture(X, 3, seed);
    for (std::size_t i = 1; i < a.history.size(); ++i)
      EXPECT_GE(a.history[i], a.history[i - 1] - 1e-9 * std::max(1.0, std::abs(a.history[i - 1])));
  }
}

TEST(Gmm, SeparatedBlobs) {
  const auto [X, y] = oracle::blobs(corner_centers(2, 2, 30.0), 40, 1.0, 8);
  EXPECT_TRUE(oracle::same_partition(gaussian_mixture(X, 2, 0).labels, y));
  EXPECT_THROW(gaussian_mixture(column({1, 2}), 3, 0), ConfigError);
}

TEST(Spectral, SeparatedBlobsAndSingleCluster) {
  const auto [X, y] = oracle::blobs(corner_centers(2, 3, 40.0), 30, 1.0, 2);
  EXPECT_TRUE(oracle::same_partition(spectral_clustering(X, 2, 0, 0.1).labels, y));
  const auto one = spectral_clustering(X, 1);
  EXPECT_EQ(one.k_found, 1);
}

TEST(Elbow, FourBlobs) {
  const auto [X, y] = oracle::blobs(corner_centers(4, 4, 10.0), 50, 1.0, 6);
  const auto curve = elbow_select_k(X, 1, 10, 0);
  EXPECT_EQ(curve.chosen_k, 4);
  for (std::size_t i = 1; i < curve.sse.size(); ++i) EXPECT_LE(curve.sse[i], curve.sse[i - 1] * (1 + 1e-9));
}

TEST(Elbow, LinearCurvePicksFirstInterior) {
  EXPECT_EQ(knee_point({1, 2, 3, 4, 5}, {50, 40, 30, 20, 10}), 2);
  EXPECT_EQ(knee_point({3, 4, 5, 6}, {9, 6, 3, 0}), 4);
  EXPECT_EQ(knee_point({1, 2, 3, 4, 5}, {100, 20, 15, 12, 10}), 2);
}

TEST(Pca, MatchesCovarianceOracle) {
  Rng rng = make_rng(10);
  Eigen::MatrixXd X(60, 5);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = standard_normal(rng) * (1.0 + static_cast<double>(j));
  const auto Z = pca_project(X, 2);
  const Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
  const Eigen::MatrixXd cov = Xc.transpose() * Xc;
  const auto [vals, vecs] = oracle::jacobi_eigen(cov);
  for (int c = 0; c < 2; ++c) {
    const Eigen::VectorXd expect = Xc * vecs.col(4 - c);
    EXPECT_NEAR(std::abs(Z.col(c).dot(expect)) / (Z.col(c).norm() * expect.norm()), 1.0, 1e-9);
    EXPECT_NEAR(Z.col(c).squaredNorm(), vals(4 - c), 1e-6 * vals(4 - c));
  }
}

TEST(Labels, PartitionalMethodsReturnRequestedK) {
  const auto [X, y] = oracle::blobs(corner_centers(3, 3, 15.0), 20, 1.0, 1);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(kmeans(X, k, 0).k_found, k);
    EXPECT_EQ(gaussian_mixture(X, k, 0).k_found, k);
    for (int l : kmeans(X, k, 0).labels) {
      EXPECT_GE(l, 0);
      EXPECT_LT(l, k);
    }
  }
}
