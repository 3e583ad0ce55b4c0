#include "orey/frac_ou.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "orey/error.hpp"

namespace orey {

double fgn_autocovariance(double H, double step, long lag) {
  const double e = 2 * H;
  const double k = static_cast<double>(std::labs(lag));
  return 0.5 * std::pow(step, e) * (abs_pow(k + 1, e) - 2 * abs_pow(k, e) + abs_pow(k - 1, e));
}

FgnCovariance::FgnCovariance(double H, std::span<const double> nodes, bool regular)
    : cells_(nodes.size() - 1), regular_(regular) {
  if (nodes.size() < 2) throw SizeError("fgn covariance needs at least two nodes");
  if (regular_) {
    const double step = (nodes.back() - nodes.front()) / static_cast<double>(cells_);
    std::vector<double> column(cells_);
    for (std::size_t l = 0; l < cells_; ++l)
      column[l] = fgn_autocovariance(H, step, static_cast<long>(l));
    toeplitz_ = std::make_unique<fft::SymmetricToeplitz>(std::move(column));
    return;
  }
  const double e = 2 * H;
  dense_.resize(static_cast<Eigen::Index>(cells_), static_cast<Eigen::Index>(cells_));
  for (std::size_t l = 1; l <= cells_; ++l) {
    for (std::size_t m = l; m <= cells_; ++m) {
      const double v = 0.5 * (abs_pow(nodes[l] - nodes[m - 1], e) + abs_pow(nodes[l - 1] - nodes[m], e) -
                              abs_pow(nodes[l] - nodes[m], e) - abs_pow(nodes[l - 1] - nodes[m - 1], e));
      dense_(static_cast<Eigen::Index>(l - 1), static_cast<Eigen::Index>(m - 1)) = v;
      dense_(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(l - 1)) = v;
    }
  }
}

std::vector<double> FgnCovariance::apply(std::span<const double> beta) const {
  if (beta.size() != cells_) throw LengthMismatchError("coefficient vector has the wrong length");
  if (regular_) return toeplitz_->apply(beta);
  Eigen::Map<const Eigen::VectorXd> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
  Eigen::VectorXd y = dense_ * b;
  return {y.data(), y.data() + y.size()};
}

double FgnCovariance::quadratic_form(std::span<const double> a, std::span<const double> b) const {
  const auto rb = apply(b);
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * rb[i];
  return s;
}

FracOuGrid::FracOuGrid(const FracOU& spec, std::span<const double> times, int refine)
    : spec_(spec), refine_(static_cast<std::size_t>(refine)), observations_(times.size()) {
  validate(spec);
  if (refine < 1) throw ParameterError("refine factor must be >= 1");
  if (times.size() < 2 || times.front() != 0.0)
    throw DomainError("observation times must start at 0 and contain a positive time");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("observation times must be strictly increasing");

  const std::size_t n = times.size() - 1;
  const std::size_t M = n * refine_;
  const double T = times.back();
  regular_ = true;
  const double h = T / static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i)
    if (std::abs(times[i] - times[i - 1] - h) > 1e-12 * T) regular_ = false;

  nodes_.resize(M + 1);
  if (regular_) {
    for (std::size_t m = 0; m <= M; ++m)
      nodes_[m] = T * (static_cast<double>(m) / static_cast<double>(M));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = times[i];
      const double d = times[i + 1] - times[i];
      for (std::size_t r = 0; r < refine_; ++r)
        nodes_[i * refine_ + r] = a + d * (static_cast<double>(r) / static_cast<double>(refine_));
    }
  }
  // observation points are grid nodes exactly
  for (std::size_t i = 0; i <= n; ++i) nodes_[i * refine_] = times[i];
}

std::vector<double> FracOuGrid::apply(std::span<const double> driver) const {
  if (driver.size() != nodes_.size()) throw LengthMismatchError("driver must have one value per node");
  const double mu = spec_.mu;
  std::vector<double> y(observations_);
  y[0] = spec_.theta * driver[0];
  double J = 0;
  for (std::size_t m = 1; m < nodes_.size(); ++m) {
    const double d = nodes_[m] - nodes_[m - 1];
    const double decay = std::exp(-mu * d);
    J = decay * J + 0.5 * d * (decay * driver[m - 1] + driver[m]);
    if (m % refine_ == 0) y[m / refine_] = spec_.theta * (driver[m] - mu * J);
  }
  return y;
}

std::vector<double> FracOuGrid::increment_coefficients(
    std::span<const std::pair<std::size_t, double>> terms) const {
  const std::size_t M = nodes_.size() - 1;
  const double mu = spec_.mu;
  const double theta = spec_.theta;
  // node coefficients b_j, j = 0..M
  std::vector<double> b(M + 1, 0.0);
  for (const auto& [i, w] : terms) {
    if (i >= observations_) throw DomainError("observation index out of range");
    const std::size_t n = node_index(i);
    if (n == 0) continue;
    b[n] += w * theta;
    // trapezoid weights on [0, u_n] times exp(-mu (u_n - u_j))
    const double un = nodes_[n];
    for (std::size_t j = 0; j <= n; ++j) {
      const double left = j > 0 ? nodes_[j] - nodes_[j - 1] : 0.0;
      const double right = j < n ? nodes_[j + 1] - nodes_[j] : 0.0;
      b[j] -= w * theta * mu * 0.5 * (left + right) * std::exp(-mu * (un - nodes_[j]));
    }
  }
  // beta_l = sum_{j >= l} b_j, l = 1..M
  std::vector<double> beta(M);
  double acc = 0;
  for (std::size_t l = M; l >= 1; --l) {
    acc += b[l];
    beta[l - 1] = acc;
  }
  return beta;
}

Eigen::MatrixXd frac_ou_covariance_matrix(const FracOU& spec, std::span<const double> times) {
  FracOuGrid grid(spec, times, spec.refine_factor);
  FgnCovariance fgn(spec.H, grid.nodes(), grid.regular());
  const std::size_t n = times.size();
  std::vector<std::vector<double>> betas(n), applied(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::pair<std::size_t, double> term{i, 1.0};
    betas[i] = grid.increment_coefficients({&term, 1});
    applied[i] = fgn.apply(betas[i]);
  }
  Eigen::MatrixXd C(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0;
      for (std::size_t l = 0; l < betas[i].size(); ++l) s += betas[i][l] * applied[j][l];
      C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
      C(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = s;
    }
  }
  return C;
}

namespace {

// Covariance of sum_i w_i Y(t_i) and sum_i v_i Y(t_i) on the grid {0, a, b}.
double pointwise_form(const FracOU& spec, double s, double t,
                      std::span<const std::pair<std::size_t, double>> lhs,
                      std::span<const std::pair<std::size_t, double>> rhs) {
  std::vector<double> times{0.0};
  const double a = std::min(s, t), b = std::max(s, t);
  if (a > 0) times.push_back(a);
  if (b > a) times.push_back(b);
  if (times.size() == 1) return 0.0;
  FracOuGrid grid(spec, times, spec.refine_factor * kPointwiseRefineMultiplier);
  FgnCovariance fgn(spec.H, grid.nodes(), grid.regular());
  // map the symbolic indices 1 (= s) and 2 (= t) onto positions in `times`
  auto position = [&](double x) -> std::size_t {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] == x) return i;
    return 0;
  };
  auto remap = [&](std::span<const std::pair<std::size_t, double>> terms) {
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto& [i, w] : terms) out.emplace_back(position(i == 1 ? s : t), w);
    return out;
  };
  const auto l = remap(lhs), r = remap(rhs);
  return fgn.quadratic_form(grid.increment_coefficients(l), grid.increment_coefficients(r));
}

}  // namespace

double frac_ou_covariance(const FracOU& spec, double s, double t) {
  const std::pair<std::size_t, double> ys{1, 1.0}, yt{2, 1.0};
  return pointwise_form(spec, s, t, {&ys, 1}, {&yt, 1});
}

double frac_ou_incremental_variance(const FracOU& spec, double s, double t) {
  const std::pair<std::size_t, double> diff[] = {{2, 1.0}, {1, -1.0}};
  return pointwise_form(spec, s, t, diff, diff);
}

}  // namespace orey
