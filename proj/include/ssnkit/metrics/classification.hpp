#pragma once

// Supervised classification metrics over dense integer class ids. The class
// universe is 0..C-1 where C covers every id in y_true, y_pred and every
// score column.

#include <Eigen/Dense>
#include <algorithm>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "ssnkit/errors.hpp"

namespace ssnkit {

struct ClassificationReport {
  double accuracy = 0.0;
  double precision_weighted = 0.0;
  double recall_weighted = 0.0;
  double f1_weighted = 0.0;
  double f1_macro = 0.0;
  std::optional<double> roc_auc_ovr;
  double train_time_sec = 0.0;
  Eigen::MatrixXi confusion;  // rows: true class, cols: predicted class
};

/// Area under the ROC curve by the rank statistic; tied scores get midranks,
/// so each tied positive/negative pair earns half credit.
inline double binary_auc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw ConfigError("score and label counts differ");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0, n_pos = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t t = i; t < j; ++t)
      if (positive[order[t]]) {
        pos_rank_sum += midrank;
        n_pos += 1.0;
      }
    i = j;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw UndefinedMetricError("auc needs both positive and negative samples");
  return (pos_rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg);
}

/// Macro mean of per-class one-vs-rest AUC over classes that have both
/// positive and negative samples in y_true.
inline double roc_auc_ovr(std::span<const int> y_true, const Eigen::MatrixXd& scores) {
  if (static_cast<Eigen::Index>(y_true.size()) != scores.rows()) throw ConfigError("score rows do not match labels");
  std::vector<double> col(y_true.size());
  std::unique_ptr<bool[]> positive(new bool[y_true.size()]);
  double total = 0.0;
  int used = 0;
  for (Eigen::Index c = 0; c < scores.cols(); ++c) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      col[i] = scores(static_cast<Eigen::Index>(i), c);
      positive[i] = y_true[i] == c;
      n_pos += positive[i] ? 1 : 0;
    }
    if (n_pos == 0 || n_pos == y_true.size()) continue;
    total += binary_auc(col, std::span<const bool>(positive.get(), y_true.size()));
    ++used;
  }
  if (used == 0) throw UndefinedMetricError("auc needs a class with both positive and negative samples");
  return total / used;
}

/// Weighted metrics average per-class values by true support; macro F1 is
/// the plain mean over classes occurring in y_true or y_pred. A zero
/// denominator makes the per-class precision, recall or F1 zero. With
/// `require_auc` set, missing scores raise MissingScoresError.
inline ClassificationReport classification_report(std::span<const int> y_true, std::span<const int> y_pred,
                                                  const Eigen::MatrixXd* scores = nullptr, bool require_auc = false) {
  if (y_true.size() != y_pred.size()) throw ConfigError("y_true and y_pred lengths differ");
  if (y_true.empty()) throw EmptyInputError("classification_report needs at least one sample");
  if (require_auc && !scores) throw MissingScoresError("roc auc requested but no scores were given");
  int classes = scores ? static_cast<int>(scores->cols()) : 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_pred[i] < 0) throw ConfigError("class ids must be >= 0");
    classes = std::max({classes, y_true[i] + 1, y_pred[i] + 1});
  }

  ClassificationReport r;
  r.confusion = Eigen::MatrixXi::Zero(classes, classes);
  for (std::size_t i = 0; i < y_true.size(); ++i) ++r.confusion(y_true[i], y_pred[i]);
  const auto n = static_cast<double>(y_true.size());
  r.accuracy = r.confusion.trace() / n;

  double f1_sum = 0.0;
  int present = 0;
  for (int c = 0; c < classes; ++c) {
    const double tp = r.confusion(c, c);
    const double support = r.confusion.row(c).sum();
    const double predicted = r.confusion.col(c).sum();
    if (support == 0 && predicted == 0) continue;
    const double precision = predicted > 0 ? tp / predicted : 0.0;
    const double recall = support > 0 ? tp / support : 0.0;
    const double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    const double w = support / n;
    r.precision_weighted += w * precision;
    r.recall_weighted += w * recall;
    r.f1_weighted += w * f1;
    f1_sum += f1;
    ++present;
  }
  r.f1_macro = f1_sum / present;
  if (scores) r.roc_auc_ovr = roc_auc_ovr(y_true, *scores);
  return r;
}

}  // namespace ssnkit
