// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. argv[1] is the ssnkit executable.

#include <chrono>
#include <iostream>
#include <numeric>
#include <sstream>

#include "cli_support.hpp"
#include "oracles.hpp"
#include "ssnkit.hpp"
#include "support.hpp"

using namespace ssnkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::cout << '[' << (ok ? "PASS" : "FAIL") << "] " << id << ' ' << detail << std::endl;
  if (!ok) ++failures;
}

// Stream-formats its arguments into one string.
template <class... Ts>
std::string str(const Ts&... parts) {
  std::ostringstream s;
  s.precision(6);
  (s << ... << parts);
  return s.str();
}

std::string random_sequence(Rng& rng, std::size_t n) {
  std::string s(n, 'A');
  for (auto& c : s) c = kAminoAlphabet[uniform_index(rng, kAlphabetSize)];
  return s;
}

std::vector<Eigen::VectorXd> corner_centers(int k, int dim, double scale) {
  std::vector<Eigen::VectorXd> c;
  for (int i = 0; i < k; ++i) c.push_back(scale * Eigen::VectorXd::Unit(dim, i));
  return c;
}

void ac1() {
  Rng rng = make_rng(101);
  std::vector<SequenceRecord> recs;
  for (int i = 0; i < 1000; ++i)
    recs.push_back({"s" + std::to_string(i), random_sequence(rng, 10 + uniform_index(rng, 1991)), {}, false});
  const Dataset ds(std::move(recs));
  std::size_t bad = 0;
  const auto t0 = Clock::now();
  for (int k : {2, 3, 4}) {
    const auto fm = featurize_dataset(ds, k, default_workers());
    for (std::size_t i = 0; i < fm.rows(); ++i)
      if (fm.row(i).total() != ds[i].residues.size() - static_cast<std::size_t>(k) + 1) ++bad;
  }
  const double t = seconds_since(t0);
  report("AC1", bad == 0 && t < 5.0,
         str("k-mer row sums equal N-k+1 on 1000 sequences x k in {2,3,4}: ", bad, " mismatches; runtime ", t,
             "s (limit 5s)"));
}

void ac2() {
  Rng rng = make_rng(202);
  int mismatches = 0, degree_violations = 0, checked = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 21 + uniform_index(rng, 180);
    std::vector<SequenceRecord> recs;
    for (std::size_t i = 0; i < n; ++i)
      recs.push_back({"s" + std::to_string(i), random_sequence(rng, 20 + uniform_index(rng, 60)), {}, false});
    const auto fm = featurize_dataset(Dataset(std::move(recs)), 2);
    const Eigen::MatrixXd D = fm.to_dense();
    std::vector<std::vector<double>> rows(n, std::vector<double>(static_cast<std::size_t>(D.cols())));
    for (std::size_t i = 0; i < n; ++i)
      for (Eigen::Index c = 0; c < D.cols(); ++c) rows[i][static_cast<std::size_t>(c)] = D(static_cast<Eigen::Index>(i), c);
    for (std::size_t K : {1ul, 5ul, 20ul}) {
      const auto g = build_ssn(fm, K);
      const auto e = g.edges();
      if (std::set<std::pair<int, int>>(e.begin(), e.end()) != oracle::knn_edges(rows, static_cast<int>(K)))
        ++mismatches;
      if (g.min_degree() < std::min(K, n - 1)) ++degree_violations;
      ++checked;
    }
  }
  report("AC2", mismatches == 0 && degree_violations == 0,
         str("SSN edges vs brute-force oracle on ", checked, " (matrix, K) cases: ", mismatches,
             " mismatches, ", degree_violations, " min-degree violations"));
}

void ac3() {
  Rng rng = make_rng(303);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 58));
    const auto g = fixture::random_connected_graph(rng, n, uniform_real(rng, 0.02, 0.3));
    const int d = std::min(8, n - 1);
    const auto e = laplacian_eigenmaps(g, d);
    const Eigen::MatrixXd A = adjacency_matrix(g);
    const Eigen::VectorXd deg = A.rowwise().sum();
    const Eigen::MatrixXd L = Eigen::MatrixXd(deg.asDiagonal()) - A;
    for (int c = 0; c < d; ++c) {
      const Eigen::VectorXd y = e.vectors.col(c);
      const double lambda = e.eigenvalues[static_cast<std::size_t>(c)];
      worst = std::max(worst, (L * y - lambda * deg.asDiagonal() * y).lpNorm<Eigen::Infinity>());
    }
  }
  report("AC3", worst < 1e-6, str("Laplacian eigenmaps max |Ly - lambda Dy| over 100 graphs: ", worst, " (< 1e-6)"));

  const auto p3 = laplacian_eigenmaps(fixture::path_graph(3), 1);
  const Eigen::VectorXd y = p3.vectors.col(0);
  const Eigen::Vector3d dir = Eigen::Vector3d(1, 0, -1).normalized();
  const double align = std::abs(y.normalized().dot(dir));
  const bool ok = std::abs(p3.eigenvalues[0] - 1.0) < 1e-9 && std::abs(align - 1.0) < 1e-9 && std::abs(y(1)) < 1e-9;
  report("AC3-P3", ok, str("path on 3 nodes: lambda=", p3.eigenvalues[0], ", |cos(y, (1,0,-1))|=", align, " (1e-9)"));
}

void ac4() {
  Rng rng = make_rng(404);
  double sgns = 0, gf = 0, lr = 0, svm = 0;
  {
    const int d = 8, m = 5;
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd x(d * (m + 2));
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = uniform_real(rng, -1, 1);
      const auto unpack = [&](const Eigen::VectorXd& v) {
        Eigen::MatrixXd neg(m, d);
        for (int r = 0; r < m; ++r) neg.row(r) = v.segment(2 * d + r * d, d).transpose();
        return std::make_tuple(Eigen::VectorXd(v.head(d)), Eigen::VectorXd(v.segment(d, d)), neg);
      };
      const auto f = [&](const Eigen::VectorXd& v) {
        const auto [tg, ctx, neg] = unpack(v);
        return sgns_pair_loss(tg, ctx, neg);
      };
      const auto [tg, ctx, neg] = unpack(x);
      const auto g = sgns_pair_gradient(tg, ctx, neg);
      Eigen::VectorXd analytic(x.size());
      analytic.head(d) = g.target;
      analytic.segment(d, d) = g.context;
      for (int r = 0; r < m; ++r) analytic.segment(2 * d + r * d, d) = g.negatives.row(r).transpose();
      sgns = std::max(sgns, oracle::relative_error(analytic, oracle::numeric_gradient(f, x)));
    }
  }
  {
    const int n = 10, d = 3;
    for (int t = 0; t < 100; ++t) {
      const auto g = fixture::random_connected_graph(rng, n, 0.3);
      Eigen::MatrixXd Y(n, d);
      for (Eigen::Index i = 0; i < Y.size(); ++i) Y.data()[i] = uniform_real(rng, -1, 1);
      const double lambda = uniform_real(rng, 0, 0.5);
      const auto f = [&](const Eigen::VectorXd& x) {
        return gf_objective(g, Eigen::Map<const Eigen::MatrixXd>(x.data(), n, d), lambda);
      };
      const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(Y.data(), Y.size());
      const Eigen::MatrixXd grad = gf_gradient(g, Y, lambda);
      gf = std::max(gf, oracle::relative_error(Eigen::Map<const Eigen::VectorXd>(grad.data(), grad.size()),
                                               oracle::numeric_gradient(f, x)));
    }
  }
  {
    const int n = 15, p = 4, c = 3;
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXd X(n, p);
      for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = uniform_real(rng, -2, 2);
      std::vector<int> y(n);
      for (auto& v : y) v = static_cast<int>(uniform_index(rng, c));
      const double l2 = uniform_real(rng, 0, 0.5);
      Eigen::VectorXd x(p * c + c);
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = uniform_real(rng, -1, 1);
      const auto f = [&](const Eigen::VectorXd& v) {
        return logistic_objective(X, y, Eigen::Map<const Eigen::MatrixXd>(v.data(), p, c), v.tail(c).transpose(), l2)
            .loss;
      };
      const auto obj =
          logistic_objective(X, y, Eigen::Map<const Eigen::MatrixXd>(x.data(), p, c), x.tail(c).transpose(), l2);
      Eigen::VectorXd analytic(x.size());
      analytic.head(p * c) = Eigen::Map<const Eigen::VectorXd>(obj.grad_W.data(), p * c);
      analytic.tail(c) = obj.grad_b.transpose();
      lr = std::max(lr, oracle::relative_error(analytic, oracle::numeric_gradient(f, x)));
    }
  }
  {
    const int n = 15, p = 4;
    int checked = 0;
    while (checked < 100) {
      Eigen::MatrixXd X(n, p);
      for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = uniform_real(rng, -2, 2);
      const Eigen::MatrixXd Xa = augment_bias(X);
      Eigen::VectorXd y(n);
      for (int i = 0; i < n; ++i) y(i) = bernoulli(rng, 0.5) ? 1.0 : -1.0;
      Eigen::VectorXd w(p + 1);
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = uniform_real(rng, -1, 1);
      // The hinge is differentiable only off the margin boundary.
      if ((y.cwiseProduct(Xa * w).array() - 1.0).abs().minCoeff() < 1e-3) continue;
      const double lambda = uniform_real(rng, 0.01, 1);
      const auto f = [&](const Eigen::VectorXd& v) { return hinge_objective(Xa, y, v, lambda); };
      svm = std::max(svm, oracle::relative_error(hinge_subgradient(Xa, y, w, lambda), oracle::numeric_gradient(f, w)));
      ++checked;
    }
  }
  report("AC4", std::max({sgns, gf, lr, svm}) < 1e-4,
         str("max relative gradient error over 100 points each: SGNS ", sgns, ", GF ", gf, ", LR ", lr, ", SVM ", svm,
             " (< 1e-4)"));
}

void ac5() {
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 10, 11;
  const std::vector<int> labels{0, 0, 1, 1};
  const double s = silhouette(X, labels), ch = calinski_harabasz(X, labels), db = davies_bouldin(X, labels);
  report("AC5-example",
         std::abs(s - 0.899749) < 1e-6 && std::abs(ch - 200.0) < 1e-6 && std::abs(db - 0.1) < 1e-6,
         str("{0,1}/{10,11}: silhouette ", s, ", CH ", ch, ", DB ", db, " (0.899749 / 200 / 0.1, 1e-6)"));

  Rng rng = make_rng(505);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 99));
    const int k = 2 + static_cast<int>(uniform_index(rng, 4));
    Eigen::MatrixXd Y(n, 3);
    std::vector<int> lab(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      lab[static_cast<std::size_t>(i)] = i < 2 ? i : static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(k)));
      for (int j = 0; j < 3; ++j) Y(i, j) = standard_normal(rng) + lab[static_cast<std::size_t>(i)];
    }
    worst = std::max(worst, std::abs(silhouette(Y, lab, default_workers()) - oracle::silhouette(Y, lab)));
  }
  report("AC5-oracle", worst < 1e-9, str("silhouette vs textbook oracle on 50 instances: max diff ", worst, " (1e-9)"));
}

void ac6() {
  int km_bad = 0, gmm_bad = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [X, y] = oracle::blobs(corner_centers(4, 5, 3.0), 50, 1.0, seed);
    const auto km = kmeans(X, 4, seed);
    for (std::size_t i = 1; i < km.history.size(); ++i)
      if (km.history[i] > km.history[i - 1] + 1e-9 * std::max(1.0, km.history[i - 1])) ++km_bad;
    const auto gm = gaussian_mixture(X, 4, seed);
    for (std::size_t i = 1; i < gm.history.size(); ++i)
      if (gm.history[i] < gm.history[i - 1] - 1e-9 * std::max(1.0, std::abs(gm.history[i - 1]))) ++gmm_bad;
  }
  report("AC6", km_bad == 0 && gmm_bad == 0,
         str("20 seeded runs: k-means SSE increases ", km_bad, ", GMM log-likelihood decreases ", gmm_bad,
             " (tolerance 1e-9)"));
}

void ac7() {
  int hits = 0;
  std::string chosen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    // Centers 10 sigma apart along each axis; pairwise separation is 10*sqrt(2) sigma.
    const auto [X, y] = oracle::blobs(corner_centers(4, 4, 10.0), 50, 1.0, 700 + seed);
    const int k = elbow_select_k(X, 1, 10, seed).chosen_k;
    hits += k == 4;
    chosen += std::to_string(k) + (seed + 1 < 20 ? "," : "");
  }
  report("AC7", hits >= 19, str("elbow picks 4 in ", hits, "/20 seeds (>= 19); choices ", chosen));
}

void ac8() {
  const auto t0 = Clock::now();
  double acc = 0, f1 = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthConfig sc;
    sc.seed = seed;
    const auto ds = synthesize_dataset(sc);
    const auto fm = featurize_dataset(ds, 3, default_workers());
    const auto g = build_ssn(fm, 20, ds.ids(), {}, SsnOptions{false, default_workers()});
    WalkConfig wc;
    wc.seed = seed;
    const auto emb = node2vec(g, 64, wc, default_workers());
    std::vector<std::string> names;
    for (const auto& r : ds) names.push_back(*r.label);
    ExperimentConfig ec;
    ec.classifiers = {"knn"};
    ec.seeds = {seed};
    ec.workers = default_workers();
    const auto result = run_experiment({{"node2vec", emb.vectors}}, encode_labels(names), ec);
    acc += result.rows.front().mean[0];
    f1 += result.rows.front().mean[4];
  }
  acc /= 5;
  f1 /= 5;
  const double t = seconds_since(t0);
  report("AC8", acc >= 0.90 && f1 >= 0.85 && t < 120.0,
         str("synthetic 4x100 node2vec(d=64)+KNN over 5 seeds: accuracy ", acc, " (>= 0.90), macro F1 ", f1,
             " (>= 0.85), runtime ", t, "s (< 120s)"));
}

void ac9() {
  const std::vector<int> counts{3369, 875, 593, 333, 292, 243, 194, 163, 107, 104, 101,
                                92,   81,  65,  64,  56,  55,  52,  47,  46,  36,  32};
  std::vector<int> y;
  for (std::size_t c = 0; c < counts.size(); ++c) y.insert(y.end(), static_cast<std::size_t>(counts[c]), static_cast<int>(c));
  double acc = 0, f1 = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SplitOptions opt;
    opt.seed = seed;
    const auto plan = make_split(y, y.size(), opt);
    std::vector<int> train_counts(counts.size(), 0);
    for (int i : plan.train_indices) ++train_counts[static_cast<std::size_t>(y[static_cast<std::size_t>(i)])];
    const int majority =
        static_cast<int>(std::max_element(train_counts.begin(), train_counts.end()) - train_counts.begin());
    std::vector<int> truth;
    for (int i : plan.test_indices) truth.push_back(y[static_cast<std::size_t>(i)]);
    const auto r = classification_report(truth, std::vector<int>(truth.size(), majority));
    acc += r.accuracy / 5;
    f1 += r.f1_macro / 5;
  }
  report("AC9", std::abs(acc - 0.481) <= 0.005 && f1 < 0.05,
         str("majority predictor on the 22-lineage 7000-sequence distribution: accuracy ", acc,
             " (0.481 +- 0.005), macro F1 ", f1, " (< 0.05)"));
}

void ac10(const std::string& cli) {
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "ssnkit_acceptance";
  fs::remove_all(root);
  const std::pair<const char*, unsigned> runs[] = {{"a", 1}, {"b", 1}, {"c", 4}};
  for (const auto& [name, workers] : runs) {
    const auto r = clitest::run_pipeline(cli, root / name, workers, 20);
    if (!r.ok) {
      report("AC10", false, str("pipeline step '", r.failed_step, "' failed in run ", name));
      return;
    }
  }
  const auto a = clitest::snapshot(root / "a");
  std::size_t compared = 0, differ = 0;
  for (const char* other : {"b", "c"}) {
    const auto b = clitest::snapshot(root / other);
    for (const auto& [file, content] : a) {
      if (clitest::is_timing_file(file) || clitest::is_log_file(file)) continue;
      ++compared;
      const auto it = b.find(file);
      if (it == b.end() || it->second != content) ++differ;
    }
  }
  report("AC10", compared > 0 && differ == 0,
         str("rerun (workers 1) and workers 4 vs workers 1: ", differ, " of ", compared,
             " artifact comparisons differ"));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: ssnkit_acceptance <path-to-ssnkit>\n";
    return 2;
  }
  const std::pair<const char*, std::function<void()>> checks[] = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", [&] { ac10(argv[1]); }},
  };
  for (const auto& [id, fn] : checks) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, str("threw: ", e.what()));
    }
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : str(failures, " acceptance check(s) failed"))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
