#pragma once

// Seeded evaluation protocol: per seed a stratified 70/30 split, grid search
// by mean k-fold accuracy on the training side, refit on the whole training
// side, and scoring on the held-out side.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ssnkit/classify/knn.hpp"
#include "ssnkit/classify/logistic.hpp"
#include "ssnkit/classify/naive_bayes.hpp"
#include "ssnkit/classify/svm.hpp"
#include "ssnkit/classify/tree.hpp"
#include "ssnkit/csv.hpp"
#include "ssnkit/metrics/classification.hpp"
#include "ssnkit/parallel.hpp"
#include "ssnkit/seqio.hpp"

namespace ssnkit {

inline const std::vector<std::string>& classifier_names() {
  static const std::vector<std::string> names{"knn",    "logistic_regression", "gaussian_nb",
                                              "linear_svm", "decision_tree",   "random_forest"};
  return names;
}

/// Short column label used in summary tables.
inline std::string classifier_label(const std::string& name) {
  static const std::map<std::string, std::string> labels{
      {"knn", "KNN"}, {"logistic_regression", "LR"}, {"gaussian_nb", "NB"},
      {"linear_svm", "SVM"}, {"decision_tree", "DT"}, {"random_forest", "RF"}};
  const auto it = labels.find(name);
  return it == labels.end() ? name : it->second;
}

/// Hyperparameter tuned for each classifier, with its search grid. A depth
/// of -1 means unlimited.
inline std::pair<std::string, std::vector<double>> default_grid(const std::string& name) {
  if (name == "knn") return {"k_votes", {1, 5, 15}};
  if (name == "logistic_regression") return {"l2", {1e-4, 1e-2, 1}};
  if (name == "gaussian_nb") return {"var_smoothing", {1e-9, 1e-6, 1e-3}};
  if (name == "linear_svm") return {"C", {0.1, 1, 10}};
  if (name == "decision_tree" || name == "random_forest") return {"max_depth", {8, 16, -1}};
  throw ConfigError("unknown classifier '" + name + "'");
}

/// Builds a classifier with its tuned hyperparameter set to `param`; every
/// other setting keeps its default.
inline std::unique_ptr<Classifier> make_classifier(const std::string& name, double param, std::uint64_t seed = 0) {
  if (name == "knn") return std::make_unique<KnnClassifier>(static_cast<int>(param));
  if (name == "logistic_regression") return std::make_unique<LogisticRegression>(LogisticConfig{.l2 = param});
  if (name == "gaussian_nb") return std::make_unique<GaussianNB>(param);
  if (name == "linear_svm") return std::make_unique<LinearSvm>(SvmConfig{.C = param, .seed = seed});
  if (name == "decision_tree") return std::make_unique<DecisionTree>(TreeConfig{.max_depth = static_cast<int>(param)});
  if (name == "random_forest") {
    ForestConfig cfg;
    cfg.tree.max_depth = static_cast<int>(param);
    cfg.seed = seed;
    return std::make_unique<RandomForest>(cfg);
  }
  throw ConfigError("unknown classifier '" + name + "'");
}

inline constexpr std::size_t kReportMetricCount = 6;
using MetricArray = std::array<double, kReportMetricCount>;

/// Column headers of the mean and std tables, in MetricArray order.
inline const std::array<const char*, kReportMetricCount>& metric_headers() {
  static const std::array<const char*, kReportMetricCount> h{"Acc.",        "Prec.",      "Recall",
                                                             "F1 (Weig.)", "F1 (Macro)", "ROC AUC"};
  return h;
}

inline MetricArray metric_array(const ClassificationReport& r) {
  return {r.accuracy, r.precision_weighted, r.recall_weighted, r.f1_weighted, r.f1_macro, r.roc_auc_ovr.value_or(NAN)};
}

struct ExperimentConfig {
  std::vector<std::string> classifiers = classifier_names();
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  double test_fraction = 0.3;
  int folds = 5;
  /// Overrides default_grid per classifier name.
  std::map<std::string, std::vector<double>> grids;
  unsigned workers = 1;
};

struct RunRecord {
  std::string method;
  std::string classifier;
  std::uint64_t seed = 0;
  double param = 0.0;
  MetricArray metrics{};
  double train_time_sec = 0.0;
};

struct SummaryRow {
  std::string method;
  std::string classifier;
  MetricArray mean{};
  MetricArray std{};
  double train_time_mean = 0.0;
  double train_time_std = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // method-major, then classifier, then seed
  std::vector<SummaryRow> rows;
};

namespace detail {

inline Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
  return out;
}

inline std::vector<int> take(std::span<const int> y, const std::vector<int>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(y[static_cast<std::size_t>(i)]);
  return out;
}

inline Error tagged(const Error& e, const std::string& method, const std::string& clf, std::uint64_t seed) {
  return Error(e.kind(), "method=" + method + " classifier=" + clf + " seed=" + std::to_string(seed) + ": " + e.what());
}

inline RunRecord run_cell(const std::string& method, const Eigen::MatrixXd& X, std::span<const int> y,
                          const std::string& clf, std::uint64_t seed, const SplitPlan& plan,
                          const std::vector<double>& grid) {
  std::size_t smallest_fold = plan.train_indices.size();
  for (const auto& f : plan.folds) smallest_fold = std::min(smallest_fold, f.train.size());
  double best_acc = -1.0, best_param = grid.front();
  for (double param : grid) {
    if (clf == "knn" && param > static_cast<double>(smallest_fold)) continue;
    double acc = 0.0;
    for (const auto& f : plan.folds) {
      auto model = make_classifier(clf, param, seed);
      model->fit(take_rows(X, f.train), take(y, f.train));
      const auto pred = model->predict(take_rows(X, f.validate));
      const auto truth = take(y, f.validate);
      double hits = 0.0;
      for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i] ? 1.0 : 0.0;
      acc += hits / static_cast<double>(pred.size());
    }
    acc /= static_cast<double>(plan.folds.size());
    if (acc > best_acc) {
      best_acc = acc;
      best_param = param;
    }
  }
  auto model = make_classifier(clf, best_param, seed);
  model->fit(take_rows(X, plan.train_indices), take(y, plan.train_indices));
  const Eigen::MatrixXd S = model->scores(take_rows(X, plan.test_indices));
  const auto pred = model->argmax(S);
  const auto truth = take(y, plan.test_indices);
  const auto report = classification_report(truth, pred, &S, true);
  return {method, clf, seed, best_param, metric_array(report), model->train_time_sec()};
}

}  // namespace detail

/// Mean and population standard deviation per (method, classifier), rows in
/// first-appearance order.
inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs) {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<const RunRecord*>> groups;
  for (const auto& r : runs) {
    std::size_t g = 0;
    while (g < rows.size() && (rows[g].method != r.method || rows[g].classifier != r.classifier)) ++g;
    if (g == rows.size()) {
      rows.push_back({r.method, r.classifier});
      groups.emplace_back();
    }
    groups[g].push_back(&r);
  }
  auto moments = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(var / static_cast<double>(v.size()))};
  };
  for (std::size_t g = 0; g < rows.size(); ++g) {
    std::vector<double> v(groups[g].size());
    for (std::size_t m = 0; m < kReportMetricCount; ++m) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = groups[g][i]->metrics[m];
      std::tie(rows[g].mean[m], rows[g].std[m]) = moments(v);
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = groups[g][i]->train_time_sec;
    std::tie(rows[g].train_time_mean, rows[g].train_time_std) = moments(v);
  }
  return rows;
}

/// `embeddings` maps a method name to a matrix whose rows align with
/// `labels`. Cells (method, classifier, seed) run in parallel; their results
/// do not depend on `workers`.
inline ExperimentResult run_experiment(const std::vector<std::pair<std::string, Eigen::MatrixXd>>& embeddings,
                                       std::span<const int> labels, const ExperimentConfig& cfg = {}) {
  if (embeddings.empty()) throw ConfigError("run_experiment needs at least one embedding");
  if (cfg.classifiers.empty() || cfg.seeds.empty()) throw ConfigError("run_experiment needs classifiers and seeds");
  for (const auto& [method, X] : embeddings)
    if (X.rows() != static_cast<Eigen::Index>(labels.size()))
      throw DimensionError("embedding '" + method + "' has " + std::to_string(X.rows()) + " rows for " +
                           std::to_string(labels.size()) + " labels");
  std::vector<std::vector<double>> grids;
  for (const auto& clf : cfg.classifiers) {
    auto grid = default_grid(clf).second;
    if (auto it = cfg.grids.find(clf); it != cfg.grids.end()) grid = it->second;
    if (grid.empty()) throw ConfigError("empty hyperparameter grid for " + clf);
    grids.push_back(std::move(grid));
  }
  std::vector<SplitPlan> plans;
  for (auto seed : cfg.seeds)
    plans.push_back(make_split(labels, labels.size(),
                               SplitOptions{.test_fraction = cfg.test_fraction, .num_folds = cfg.folds, .seed = seed}));

  const std::size_t nc = cfg.classifiers.size(), ns = cfg.seeds.size();
  ExperimentResult result;
  result.runs.resize(embeddings.size() * nc * ns);
  parallel_for(result.runs.size(), cfg.workers, [&](std::size_t cell) {
    const std::size_t m = cell / (nc * ns), c = (cell / ns) % nc, s = cell % ns;
    const auto& method = embeddings[m].first;
    const auto& clf = cfg.classifiers[c];
    try {
      result.runs[cell] = detail::run_cell(method, embeddings[m].second, labels, clf, cfg.seeds[s], plans[s], grids[c]);
    } catch (const Error& e) {
      throw detail::tagged(e, method, clf, cfg.seeds[s]);
    }
  });
  result.rows = summarize(result.runs);
  return result;
}

inline constexpr std::string_view kRunsHeader =
    "method,classifier,seed,param,accuracy,precision_weighted,recall_weighted,f1_weighted,f1_macro,roc_auc_ovr";

inline void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << kRunsHeader << '\n';
  for (const auto& r : runs) {
    out << r.method << ',' << r.classifier << ',' << r.seed << ',' << csv::format_double(r.param);
    for (double v : r.metrics) out << ',' << csv::format_double(v);
    out << '\n';
  }
}

inline void write_run_timings_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << "method,classifier,seed,train_time_sec\n";
  for (const auto& r : runs)
    out << r.method << ',' << r.classifier << ',' << r.seed << ',' << csv::format_double(r.train_time_sec) << '\n';
}

/// Reads write_runs_csv output; train times stay zero.
inline std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || csv::strip_cr(line) != kRunsHeader) throw SchemaError("runs csv: unexpected header");
  std::vector<RunRecord> runs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto f = csv::split(line);
    const std::string ctx = "runs csv line " + std::to_string(lineno);
    if (f.size() != 4 + kReportMetricCount) throw SchemaError(ctx + ": expected 10 fields");
    RunRecord r{std::string(f[0]), std::string(f[1]), csv::parse_number<std::uint64_t>(f[2], ctx),
                csv::parse_number<double>(f[3], ctx)};
    for (std::size_t m = 0; m < kReportMetricCount; ++m) r.metrics[m] = csv::parse_number<double>(f[4 + m], ctx);
    runs.push_back(std::move(r));
  }
  return runs;
}

/// Table with columns "Embed.,Classifier,<metric headers>"; `use_std` picks
/// the std row values instead of the means. Values use `digits` decimals, or
/// shortest round-trip form when digits < 0.
inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows, bool use_std, int digits = -1) {
  out << "Embed.,Classifier";
  for (const char* h : metric_headers()) out << ',' << h;
  out << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << classifier_label(r.classifier);
    for (double v : use_std ? r.std : r.mean) out << ',' << (digits < 0 ? csv::format_double(v) : csv::format_fixed(v, digits));
    out << '\n';
  }
}

inline void write_summary_timings_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "Embed.,Classifier,Train Time (Sec.),Train Time Std (Sec.)\n";
  for (const auto& r : rows)
    out << r.method << ',' << classifier_label(r.classifier) << ',' << csv::format_double(r.train_time_mean) << ','
        << csv::format_double(r.train_time_std) << '\n';
}

}  // namespace ssnkit
