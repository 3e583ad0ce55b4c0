#pragma once

// Small statistics helpers shared by the test suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace orey::testing {

inline double mean(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double sample_std(std::span<const double> x) {
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// One-sample Kolmogorov-Smirnov statistic against N(0, 1).
inline double ks_statistic(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

// Critical value at level 0.001 (asymptotic).
inline double ks_critical_001(std::size_t n) { return 1.949 / std::sqrt(static_cast<double>(n)); }

// Rows are replicas; returns the (uncentered, known zero mean) covariance.
inline Eigen::MatrixXd second_moment(const Eigen::MatrixXd& samples) {
  return samples.transpose() * samples / static_cast<double>(samples.rows());
}

// Standard error of the second-moment estimate of C_ij for a centered
// Gaussian vector: Var(X_i X_j) = C_ii C_jj + C_ij^2.
inline double moment_se(const Eigen::MatrixXd& C, Eigen::Index i, Eigen::Index j, std::size_t R) {
  return std::sqrt((C(i, i) * C(j, j) + C(i, j) * C(i, j)) / static_cast<double>(R));
}

}  // namespace orey::testing
