#pragma once

// Second-order quadratic variations along arbitrary partitions, their exact
// expectations and the diagnostics behind almost-sure convergence.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "orey/partition.hpp"
#include "orey/process.hpp"
#include "orey/sampler.hpp"

namespace orey {

/// Delta^{(2)}_k X = Delta_k t X(t_{k+1}) + Delta_{k+1} t X(t_{k-1})
///                   - (Delta_k t + Delta_{k+1} t) X(t_k),   k = 1..N-1,
/// stored at index k-1, with the weights
/// mu_k = (Delta_k t + Delta_{k+1} t) (Delta_{k+1} t)^{gamma+1/2} (Delta_k t)^{gamma+1/2}.
struct SecondIncrements {
  std::vector<double> values;
  std::vector<double> weights;
  double gamma = 0.5;
};

std::vector<double> second_increments(const Partition& p, std::span<const double> x);
SecondIncrements second_increments(const Path& path, double gamma);

/// 2 sum_k Delta_{k+1} t (Delta^{(2)}_k X)^2 / mu_k.
double normalized_qv(const Partition& p, std::span<const double> x, double gamma);
double normalized_qv(const Path& path, double gamma);

/// (N/T)^{2 gamma - 1} sum_k (X_{k+1} - 2 X_k + X_{k-1})^2; valid on regular grids only.
double normalized_qv_regular(std::span<const double> x, double T, double gamma);

/// sum_k (Delta^{(2)}_k X)^2 without weights.
double raw_qv(const Partition& p, std::span<const double> x);
double raw_qv(const Path& path);

/// g(lambda) = (1 + lambda^{2 gamma - 1} - (1 + lambda)^{2 gamma - 1}) / lambda^{gamma - 1/2}.
double g_function(double lambda, double gamma);

/// 2 kappa^2 int_0^T g(l(t)) dt over the ratio step function.
double limit_value(const OreyProfile& profile, const RatioProfile& ratio, double T);

enum class DMatrixStorage { automatic, dense, banded };

inline constexpr std::size_t kDenseLimit = 2048;
inline constexpr std::size_t kDefaultBandwidth = 64;

/// Covariance matrix of the second increments, d_jk = E(Delta^{(2)}_j X Delta^{(2)}_k X),
/// indices 0..N-2 standing for k = 1..N-1. Entries outside the band of a banded
/// matrix read as 0.
class DMatrix {
 public:
  DMatrix(std::size_t n, std::size_t bandwidth, MeshStats mesh, double gamma);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bandwidth_; }
  bool banded() const { return bandwidth_ + 1 < n_; }
  const MeshStats& mesh() const { return mesh_; }
  double gamma() const { return gamma_; }

  double operator()(std::size_t j, std::size_t k) const;
  void set(std::size_t j, std::size_t k, double value);

  /// sum_j |d_jk|
  double abs_rowsum(std::size_t k) const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t n_;
  std::size_t bandwidth_;
  MeshStats mesh_;
  double gamma_;
  // diagonals_[o][i] = d(i, i + o), o = 0..bandwidth
  std::vector<std::vector<double>> diagonals_;
};

DMatrix d_matrix(const ProcessSpec& spec, const Partition& p,
                 DMatrixStorage storage = DMatrixStorage::automatic,
                 std::size_t bandwidth = kDefaultBandwidth);

/// Diagonal d_kk only, O(N) kernel evaluations (O(N M log M) for fractional O-U).
std::vector<double> d_diagonal(const ProcessSpec& spec, const Partition& p);

/// 2 sum_k Delta_{k+1} t d_kk / mu_k, the exact E V along p.
double expected_qv(const ProcessSpec& spec, const Partition& p, const OreyProfile& profile);

struct RowsumDiagnostic {
  double max_rowsum = 0;
  double bound_ratio = 0;  // max_rowsum / p_n^{2 + 2 gamma}
};

RowsumDiagnostic rowsum_diagnostic(const DMatrix& d);

/// 2 max_k sum_j sqrt(Delta_j t Delta_k t / (mu_j mu_k)) |d_jk|, a Gershgorin
/// bound on the largest eigenvalue of weighted_covariance().
double eigen_bound(const DMatrix& d, const Partition& p, double gamma);

/// Covariance of the vector sqrt(2 Delta_k t / mu_k) Delta^{(2)}_k X.
Eigen::MatrixXd weighted_covariance(const DMatrix& d, const Partition& p, double gamma);

}  // namespace orey
