#pragma once

// Elbow selection of the cluster count from the k-means SSE curve.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ssnkit/cluster/kmeans.hpp"
#include "ssnkit/errors.hpp"

namespace ssnkit {

struct ElbowCurve {
  std::vector<int> ks;
  std::vector<double> sse;
  std::vector<double> runtimes_sec;
  int chosen_k = 0;
};

/// Knee of a decreasing curve: both axes are scaled to [0, 1] between the
/// first and last point, and the interior point farthest from the chord
/// joining them wins (first maximum on ties). With only the two endpoints,
/// the second one is returned.
inline int knee_point(const std::vector<int>& ks, const std::vector<double>& sse) {
  if (ks.size() < 2 || ks.size() != sse.size()) throw ConfigError("knee detection needs at least two points");
  const double x_span = ks.back() - ks.front();
  const double y_span = sse.front() - sse.back();
  std::size_t best = 1;
  double best_dev = -1.0;
  for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
    const double x = (ks[i] - ks.front()) / x_span;
    const double y = y_span != 0 ? (sse[i] - sse.back()) / y_span : 1.0 - x;
    const double dev = std::abs(1.0 - x - y) / std::sqrt(2.0);
    if (dev > best_dev + 1e-12) {
      best_dev = dev;
      best = i;
    }
  }
  return ks[best];
}

/// Runs k-means for every k in [k_min, k_max] and records SSE and wall-clock
/// time. Selection uses SSE only.
inline ElbowCurve elbow_select_k(const Eigen::MatrixXd& X, int k_min, int k_max, std::uint64_t seed,
                                 int n_init = 10) {
  if (k_min < 1 || k_min >= k_max) throw ConfigError("elbow needs 1 <= k_min < k_max");
  if (k_max > X.rows()) throw ConfigError("k_max exceeds the number of points");
  ElbowCurve curve;
  KMeansOptions opt;
  opt.n_init = n_init;
  for (int k = k_min; k <= k_max; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = kmeans(X, k, seed, opt);
    const auto t1 = std::chrono::steady_clock::now();
    curve.ks.push_back(k);
    curve.sse.push_back(*a.inertia);
    curve.runtimes_sec.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  curve.chosen_k = knee_point(curve.ks, curve.sse);
  return curve;
}

}  // namespace ssnkit
