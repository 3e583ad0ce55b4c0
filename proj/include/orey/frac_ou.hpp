#pragma once

// Discretization of the fractional Ornstein-Uhlenbeck solution
//   Y_t = theta (B_t - mu int_0^t exp(-mu (t - u)) B_u du),   X_t = x0 e^{-mu t} + Y_t,
// with the integral taken by the trapezoid rule on a refined grid. Every
// Y(t_i) is then a linear functional of the driving fBm at the grid nodes, so
// sampler and kernel share one construction.

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orey/fft.hpp"
#include "orey/process.hpp"

namespace orey {

/// Autocovariance of fractional Gaussian noise with step `step` at integer lag.
double fgn_autocovariance(double H, double step, long lag);

/// Covariance of fBm increments over the cells of a node grid u_0 < ... < u_M.
/// Uses an FFT Toeplitz product on regular grids and a dense matrix otherwise.
class FgnCovariance {
 public:
  FgnCovariance(double H, std::span<const double> nodes, bool regular);

  std::size_t cells() const { return cells_; }
  std::vector<double> apply(std::span<const double> beta) const;
  double quadratic_form(std::span<const double> a, std::span<const double> b) const;

 private:
  std::size_t cells_ = 0;
  bool regular_ = false;
  std::unique_ptr<fft::SymmetricToeplitz> toeplitz_;
  Eigen::MatrixXd dense_;
};

/// Refined node grid for a set of observation times (t_0 = 0 required).
class FracOuGrid {
 public:
  FracOuGrid(const FracOU& spec, std::span<const double> times, int refine);

  std::span<const double> nodes() const { return nodes_; }
  std::size_t refine() const { return refine_; }
  std::size_t observation_count() const { return observations_; }
  std::size_t node_index(std::size_t i) const { return i * refine_; }
  bool regular() const { return regular_; }
  const FracOU& spec() const { return spec_; }

  /// Centered Y at the observation times from the driver at the nodes.
  std::vector<double> apply(std::span<const double> driver) const;

  /// Increment coefficients beta (size M) of sum_i w_i Y(t_i) such that the
  /// functional equals sum_l beta_l (B(u_l) - B(u_{l-1})).
  std::vector<double> increment_coefficients(
      std::span<const std::pair<std::size_t, double>> terms) const;

 private:
  FracOU spec_;
  std::size_t refine_ = 1;
  std::size_t observations_ = 0;
  bool regular_ = false;
  std::vector<double> nodes_;
};

/// Covariance matrix of centered Y at `times` using refine_factor nodes per
/// interval. times[0] must be 0.
Eigen::MatrixXd frac_ou_covariance_matrix(const FracOU& spec, std::span<const double> times);

/// Pointwise kernels on the grid {0, s, t}, each interval split into
/// 16 * refine_factor cells.
double frac_ou_covariance(const FracOU& spec, double s, double t);
double frac_ou_incremental_variance(const FracOU& spec, double s, double t);

inline constexpr int kPointwiseRefineMultiplier = 16;

}  // namespace orey
