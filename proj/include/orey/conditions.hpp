#pragma once

// Numerical checks of the scaling conditions behind the Orey index.

#include <cstddef>
#include <vector>

#include "orey/process.hpp"

namespace orey {

/// Boundary-layer function phi in the class Psi: phi(h) -> 0 and
/// h L(h)^3 -> 0 with L(h) = phi(h) / h.
class PhiFunction {
 public:
  enum class Kind { log_power, power };

  /// phi(h) = h |ln h|^alpha, alpha > 0.
  static PhiFunction log_power(double alpha);
  /// phi(h) = h^{1 - beta}, 0 < beta < 1/3.
  static PhiFunction power(double beta);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

  double operator()(double h) const;
  double L(double h) const { return (*this)(h) / h; }

 private:
  PhiFunction(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

struct SweepRow {
  double delta = 0;
  double lambda = 0;
  double bound = 0;
  bool pass = false;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool all_pass() const;
};

/// Closed-form upper bound on Lambda(delta) for the family.
double lambda_bound(const ProcessSpec& spec, const PhiFunction& phi, double delta, double T);

/// Lambda(delta) = sup_{phi(delta) <= t <= T - delta} sup_{0 < h <= delta}
///                 |sigma_X(t, t+h) / (kappa h^gamma) - 1|
/// maximized over a geometric (t, h) grid, compared with lambda_bound.
SweepReport lambda_sweep(const ProcessSpec& spec, const OreyProfile& profile,
                         const PhiFunction& phi, const std::vector<double>& deltas,
                         std::size_t t_points = 64, std::size_t h_points = 32,
                         double T = 1.0);

struct RemarkRow {
  double delta = 0;
  double sup = 0;
  double constant = 0;
  bool pass = false;
};

struct RemarkReport {
  double H = 0;
  std::vector<RemarkRow> rows;
  bool all_pass() const;
};

/// H (2H - 1) (2^{2H-1} - 1) 3^{2H-2}.
double remark_constant(double H);

inline constexpr double kRemarkGridTolerance = 0.05;

/// For sub-fBm with H > 1/2: sup over s in [delta, T - delta], h in (0, delta]
/// of |h^{-2H} f_s(h)| stays above remark_constant(H) (less 5% grid slack).
RemarkReport remark_check(double H, const std::vector<double>& deltas,
                          std::size_t s_points = 64, std::size_t h_points = 32,
                          double T = 1.0);

struct LogRatioRow {
  double h = 0;
  double sup = 0;
  double inf = 0;
  double origin = 0;
};

/// sup / inf over s in [phi(h), T - h] of ln sigma_X(s, s+h) / ln h, and the
/// s = 0 curve ln sigma_X(0, h) / ln h.
std::vector<LogRatioRow> log_ratio_profile(const ProcessSpec& spec, const PhiFunction& phi,
                                           const std::vector<double>& h_grid,
                                           std::size_t s_points = 64, double T = 1.0);

/// n points from lo to hi, geometrically spaced, ascending, endpoints exact.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

}  // namespace orey
