#pragma once

// Gaussian mixture with diagonal covariances fitted by EM. Variances are
// floored at var_floor, which keeps every M-step a constrained maximizer, so
// the log-likelihood still never decreases.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ssnkit/cluster/kmeans.hpp"
#include "ssnkit/cluster/types.hpp"
#include "ssnkit/errors.hpp"
#include "ssnkit/random.hpp"

namespace ssnkit {

struct GmmOptions {
  int max_iter = 100;
  double var_floor = 1e-6;
  /// Stop once the log-likelihood gain drops below tol * |log-likelihood|.
  double tol = 1e-10;
};

struct GmmResult {
  ClusterAssignment assignment;
  Eigen::VectorXd weights;          // per component
  Eigen::MatrixXd means;            // k x p
  Eigen::MatrixXd variances;        // k x p
  Eigen::MatrixXd responsibilities; // n x k, columns in component order
};

namespace detail {

/// Log joint density log(w_c) + log N(x_i | mu_c, diag(var_c)) for all i, c.
inline Eigen::MatrixXd gmm_log_joint(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, const Eigen::MatrixXd& mu,
                                     const Eigen::MatrixXd& var) {
  const auto n = X.rows();
  const auto k = mu.rows();
  const double log2pi = std::log(2.0 * M_PI);
  Eigen::MatrixXd L(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::RowVectorXd inv = var.row(c).cwiseInverse();
    const double norm = -0.5 * (static_cast<double>(X.cols()) * log2pi + var.row(c).array().log().sum());
    for (Eigen::Index i = 0; i < n; ++i) {
      const double quad = ((X.row(i) - mu.row(c)).array().square() * inv.array()).sum();
      L(i, c) = std::log(w(c)) + norm - 0.5 * quad;
    }
  }
  return L;
}

}  // namespace detail

inline GmmResult fit_gaussian_mixture(const Eigen::MatrixXd& X, int k, std::uint64_t seed,
                                      const GmmOptions& opt = {}) {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (k > X.rows()) throw ConfigError("k exceeds the number of points");
  if (!(opt.var_floor > 0)) throw ConfigError("var_floor must be > 0");
  const auto n = X.rows();
  const auto p = X.cols();

  GmmResult res;
  Rng rng = make_rng(seed, 0x676d);
  res.means = detail::kmeans_plus_plus(X, k, rng);
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::RowVectorXd global_var =
      ((X.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(n)).cwiseMax(opt.var_floor);
  res.variances = global_var.replicate(k, 1);
  res.weights = Eigen::VectorXd::Constant(k, 1.0 / k);

  auto& hist = res.assignment.history;
  Eigen::MatrixXd R(n, k);
  for (int it = 0; it <= opt.max_iter; ++it) {
    // E-step
    const Eigen::MatrixXd L = detail::gmm_log_joint(X, res.weights, res.means, res.variances);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = L.row(i).maxCoeff();
      const double lse = m + std::log((L.row(i).array() - m).exp().sum());
      R.row(i) = (L.row(i).array() - lse).exp();
      ll += lse;
    }
    hist.push_back(ll);
    const auto t = hist.size();
    if (it == opt.max_iter || (t >= 2 && hist[t - 1] - hist[t - 2] < opt.tol * std::abs(ll))) break;

    // M-step
    const Eigen::VectorXd nk = R.colwise().sum().transpose();
    for (Eigen::Index c = 0; c < k; ++c) {
      res.weights(c) = nk(c) / static_cast<double>(n);
      if (nk(c) <= 0) continue;
      res.means.row(c) = (R.col(c).transpose() * X) / nk(c);
      Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(p);
      for (Eigen::Index i = 0; i < n; ++i) v += R(i, c) * (X.row(i) - res.means.row(c)).array().square().matrix();
      res.variances.row(c) = (v / nk(c)).cwiseMax(opt.var_floor);
    }
  }
  res.responsibilities = R;
  auto& a = res.assignment;
  a.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index arg;
    R.row(i).maxCoeff(&arg);
    a.labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
  }
  a.k_found = canonicalize_labels(a.labels);
  a.log_likelihood = hist.back();
  return res;
}

/// Hard labels from the posterior argmax, renumbered by first occurrence.
inline ClusterAssignment gaussian_mixture(const Eigen::MatrixXd& X, int k, std::uint64_t seed,
                                          const GmmOptions& opt = {}) {
  return fit_gaussian_mixture(X, k, seed, opt).assignment;
}

}  // namespace ssnkit
