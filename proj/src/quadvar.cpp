#include "orey/quadvar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "orey/error.hpp"
#include "orey/frac_ou.hpp"
#include "orey/parallel.hpp"
#include "orey/summation.hpp"

namespace orey {
namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0 && gamma < 1)) throw DomainError("gamma must lie in (0, 1)");
}

void check_length(const Partition& p, std::span<const double> x) {
  if (x.size() != p.size())
    throw LengthMismatchError("path has " + std::to_string(x.size()) + " values for " +
                              std::to_string(p.size()) + " partition points");
}

// mu_k for k = 1..N-1, stored at k-1
std::vector<double> increment_weights(const Partition& p, double gamma) {
  const std::size_t n = p.steps() - 1;
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = p.step(i + 1), b = p.step(i + 2);
    mu[i] = (a + b) * std::pow(b, gamma + 0.5) * std::pow(a, gamma + 0.5);
  }
  return mu;
}

// coefficients of Delta^{(2)}_k at (t_{k-1}, t_k, t_{k+1}); i = k - 1
std::array<double, 3> stencil(const Partition& p, std::size_t i) {
  const double a = p.step(i + 1), b = p.step(i + 2);
  return {b, -(a + b), a};
}

}  // namespace

std::vector<double> second_increments(const Partition& p, std::span<const double> x) {
  check_length(p, x);
  const std::size_t n = p.steps() - 1;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = stencil(p, i);
    d[i] = c[2] * x[i + 2] + c[0] * x[i] + c[1] * x[i + 1];
  }
  return d;
}

SecondIncrements second_increments(const Path& path, double gamma) {
  check_gamma(gamma);
  return {second_increments(path.partition, path.values), increment_weights(path.partition, gamma),
          gamma};
}

double normalized_qv(const Partition& p, std::span<const double> x, double gamma) {
  check_gamma(gamma);
  const auto d = second_increments(p, x);
  const auto mu = increment_weights(p, gamma);
  CompensatedSum sum;
  for (std::size_t i = 0; i < d.size(); ++i) sum.add(p.step(i + 2) * d[i] * d[i] / mu[i]);
  return 2 * sum.value();
}

double normalized_qv(const Path& path, double gamma) {
  return normalized_qv(path.partition, path.values, gamma);
}

double normalized_qv_regular(std::span<const double> x, double T, double gamma) {
  check_gamma(gamma);
  if (x.size() < 4) throw SizeError("need at least 4 points");
  if (!(T > 0)) throw DomainError("T must be positive");
  const double N = static_cast<double>(x.size() - 1);
  CompensatedSum sum;
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    const double d = x[k + 1] - 2 * x[k] + x[k - 1];
    sum.add(d * d);
  }
  return std::pow(N / T, 2 * gamma - 1) * sum.value();
}

double raw_qv(const Partition& p, std::span<const double> x) {
  CompensatedSum sum;
  for (double d : second_increments(p, x)) sum.add(d * d);
  return sum.value();
}

double raw_qv(const Path& path) { return raw_qv(path.partition, path.values); }

double g_function(double lambda, double gamma) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
  check_gamma(gamma);
  const double e = 2 * gamma - 1;
  return (1 + std::pow(lambda, e) - std::pow(1 + lambda, e)) / std::pow(lambda, gamma - 0.5);
}

double limit_value(const OreyProfile& profile, const RatioProfile& ratio, double T) {
  if (ratio.values.empty() || ratio.values.size() != ratio.breakpoints.size())
    throw DomainError("malformed ratio profile");
  if (std::abs(ratio.horizon - T) > 1e-12 * T)
    throw DomainError("ratio profile horizon differs from T");
  CompensatedSum sum;
  for (std::size_t i = 0; i < ratio.values.size(); ++i) {
    const double end = i + 1 < ratio.breakpoints.size() ? ratio.breakpoints[i + 1] : T;
    sum.add((end - ratio.breakpoints[i]) * g_function(ratio.values[i], profile.gamma));
  }
  return 2 * profile.kappa * profile.kappa * sum.value();
}

// ---------------------------------------------------------------------------

DMatrix::DMatrix(std::size_t n, std::size_t bandwidth, MeshStats mesh, double gamma)
    : n_(n), bandwidth_(n == 0 ? 0 : std::min(bandwidth, n - 1)), mesh_(mesh), gamma_(gamma) {
  diagonals_.resize(bandwidth_ + 1);
  for (std::size_t o = 0; o <= bandwidth_; ++o) diagonals_[o].assign(n_ - o, 0.0);
}

double DMatrix::operator()(std::size_t j, std::size_t k) const {
  if (j >= n_ || k >= n_) throw SizeError("d-matrix index out of range");
  if (j > k) std::swap(j, k);
  const std::size_t o = k - j;
  return o <= bandwidth_ ? diagonals_[o][j] : 0.0;
}

void DMatrix::set(std::size_t j, std::size_t k, double value) {
  if (j >= n_ || k >= n_) throw SizeError("d-matrix index out of range");
  if (j > k) std::swap(j, k);
  const std::size_t o = k - j;
  if (o > bandwidth_) throw SizeError("d-matrix entry outside the band");
  diagonals_[o][j] = value;
}

double DMatrix::abs_rowsum(std::size_t k) const {
  const std::size_t lo = k > bandwidth_ ? k - bandwidth_ : 0;
  const std::size_t hi = std::min(n_ - 1, k + bandwidth_);
  CompensatedSum sum;
  for (std::size_t j = lo; j <= hi; ++j) sum.add(std::abs((*this)(j, k)));
  return sum.value();
}

Eigen::MatrixXd DMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t o = 0; o <= bandwidth_; ++o)
    for (std::size_t i = 0; i + o < n_; ++i) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(i + o);
      m(a, b) = m(b, a) = diagonals_[o][i];
    }
  return m;
}

namespace {

// d_jk = -1/2 sum_{a,b} c_a^j c_b^k sigma^2(t_a, t_b); the stencils sum to zero, so
// the variance terms of the covariance drop out and no large terms cancel.
double d_entry(const ProcessSpec& spec, const Partition& p, std::size_t j, std::size_t k) {
  const auto cj = stencil(p, j), ck = stencil(p, k);
  double s = 0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      const std::size_t ia = j + a, ib = k + b;
      if (ia == ib) continue;
      s += cj[a] * ck[b] * incremental_variance(spec, p.time(ia), p.time(ib));
    }
  return -0.5 * s;
}

// Shared machinery for fractional O-U entries: beta vectors of every second
// increment on the refined grid.
struct FracOuIncrements {
  FracOuGrid grid;
  FgnCovariance fgn;

  FracOuIncrements(const FracOU& spec, const Partition& p)
      : grid(spec, p.times(), spec.refine_factor), fgn(spec.H, grid.nodes(), grid.regular()) {}

  std::vector<double> beta(const Partition& p, std::size_t i) const {
    const auto c = stencil(p, i);
    const std::pair<std::size_t, double> terms[] = {{i, c[0]}, {i + 1, c[1]}, {i + 2, c[2]}};
    return grid.increment_coefficients(terms);
  }
};

double dot(std::span<const double> a, std::span<const double> b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

}  // namespace

DMatrix d_matrix(const ProcessSpec& spec, const Partition& p, DMatrixStorage storage,
                 std::size_t bandwidth) {
  validate(spec);
  const std::size_t n = p.steps() - 1;
  const bool dense =
      storage == DMatrixStorage::dense || (storage == DMatrixStorage::automatic && n <= kDenseLimit);
  DMatrix d(n, dense ? n - 1 : bandwidth, mesh_stats(p), orey_profile(spec).gamma);
  const std::size_t bw = d.bandwidth();

  if (const auto* ou = std::get_if<FracOU>(&spec)) {
    FracOuIncrements inc(*ou, p);
    std::vector<std::vector<double>> betas(n), applied(n);
    parallel_for(n, [&](std::size_t i) {
      betas[i] = inc.beta(p, i);
      applied[i] = inc.fgn.apply(betas[i]);
    });
    parallel_for(n, [&](std::size_t j) {
      for (std::size_t k = j; k <= std::min(n - 1, j + bw); ++k) d.set(j, k, dot(betas[j], applied[k]));
    });
    return d;
  }

  parallel_for(n, [&](std::size_t j) {
    for (std::size_t k = j; k <= std::min(n - 1, j + bw); ++k) d.set(j, k, d_entry(spec, p, j, k));
  });
  return d;
}

std::vector<double> d_diagonal(const ProcessSpec& spec, const Partition& p) {
  validate(spec);
  const std::size_t n = p.steps() - 1;
  std::vector<double> diag(n);
  if (const auto* ou = std::get_if<FracOU>(&spec)) {
    FracOuIncrements inc(*ou, p);
    parallel_for(n, [&](std::size_t i) {
      const auto beta = inc.beta(p, i);
      diag[i] = dot(beta, inc.fgn.apply(beta));
    });
    return diag;
  }
  parallel_for(n, [&](std::size_t i) { diag[i] = d_entry(spec, p, i, i); });
  return diag;
}

double expected_qv(const ProcessSpec& spec, const Partition& p, const OreyProfile& profile) {
  check_gamma(profile.gamma);
  const auto diag = d_diagonal(spec, p);
  const auto mu = increment_weights(p, profile.gamma);
  CompensatedSum sum;
  for (std::size_t i = 0; i < diag.size(); ++i) sum.add(p.step(i + 2) * diag[i] / mu[i]);
  return 2 * sum.value();
}

RowsumDiagnostic rowsum_diagnostic(const DMatrix& d) {
  RowsumDiagnostic r;
  for (std::size_t k = 0; k < d.size(); ++k) r.max_rowsum = std::max(r.max_rowsum, d.abs_rowsum(k));
  r.bound_ratio = r.max_rowsum / std::pow(d.mesh().p_n, 2 + 2 * d.gamma());
  return r;
}

namespace {

// sqrt(2 Delta_k t / mu_k), indices as in the d-matrix
std::vector<double> eigen_weights(const Partition& p, double gamma) {
  const auto mu = increment_weights(p, gamma);
  std::vector<double> w(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) w[i] = std::sqrt(2 * p.step(i + 1) / mu[i]);
  return w;
}

void check_dmatrix_partition(const DMatrix& d, const Partition& p) {
  if (d.size() + 2 != p.size()) throw LengthMismatchError("d-matrix does not match the partition");
}

}  // namespace

double eigen_bound(const DMatrix& d, const Partition& p, double gamma) {
  check_gamma(gamma);
  check_dmatrix_partition(d, p);
  const auto w = eigen_weights(p, gamma);
  const std::size_t n = d.size(), bw = d.bandwidth();
  double best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    CompensatedSum s;
    for (std::size_t j = k > bw ? k - bw : 0; j <= std::min(n - 1, k + bw); ++j)
      s.add(w[j] * w[k] * std::abs(d(j, k)));
    best = std::max(best, s.value());
  }
  return best;
}

Eigen::MatrixXd weighted_covariance(const DMatrix& d, const Partition& p, double gamma) {
  check_gamma(gamma);
  check_dmatrix_partition(d, p);
  const auto w = eigen_weights(p, gamma);
  Eigen::MatrixXd m = d.to_dense();
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  return wv.asDiagonal() * m * wv.asDiagonal();
}

}  // namespace orey
