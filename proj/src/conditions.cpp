#include "orey/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orey/error.hpp"
#include "orey/parallel.hpp"

namespace orey {

PhiFunction PhiFunction::log_power(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw ParameterError("log-power alpha must be positive");
  return PhiFunction(Kind::log_power, alpha);
}

PhiFunction PhiFunction::power(double beta) {
  // h L(h)^3 = h^{1 - 3 beta} only vanishes for beta < 1/3
  if (!(beta > 0 && beta < 1.0 / 3.0)) throw ParameterError("power beta must lie in (0, 1/3)");
  return PhiFunction(Kind::power, beta);
}

double PhiFunction::operator()(double h) const {
  if (!(h > 0)) throw DomainError("phi is defined for h > 0 only");
  if (kind_ == Kind::log_power) return h * std::pow(std::abs(std::log(h)), param_);
  return std::pow(h, 1 - param_);
}

bool SweepReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.pass; });
}

bool RemarkReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RemarkRow& r) { return r.pass; });
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi >= lo)) throw DomainError("geometric grid needs 0 < lo <= hi");
  if (n < 2) throw SizeError("geometric grid needs at least 2 points");
  std::vector<double> g(n);
  const double r = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(r * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

double lambda_bound(const ProcessSpec& spec, const PhiFunction& phi, double delta, double T) {
  validate(spec);
  if (!(delta > 0) || !(T > 0)) throw DomainError("delta and T must be positive");
  const double L = phi.L(delta);
  if (std::holds_alternative<FBm>(spec)) return 0.0;
  if (const auto* p = std::get_if<SubFBm>(&spec))
    return std::pow(2.0, 2 * p->H - 1) / std::pow(L, 2 - 2 * p->H);
  if (const auto* p = std::get_if<BiFBm>(&spec)) return 8 / std::pow(L, 2 - 2 * p->H * p->K);
  if (const auto* p = std::get_if<FBridge>(&spec)) {
    const double Tb = p->horizon;
    if (p->H < 0.5) return std::pow(Tb, -2 * p->H) * std::pow(delta, 2 * p->H);
    return p->H * p->H * std::pow(Tb, 2 * p->H - 2) * std::pow(delta, 2 - 2 * p->H);
  }
  const auto& p = std::get<FracOU>(spec);
  const double S = 2 * p.x0 * p.x0 + 4 * p.theta * p.theta * std::exp(2 * p.mu * T) *
                                         std::pow(T, 2 * p.H) * (1 + p.mu * p.mu * T * T);
  const double d = std::pow(delta, 1 - p.H);
  return d * (d * p.mu * p.mu * S + 2 * p.mu * p.theta * std::sqrt(S)) / (p.theta * p.theta);
}

SweepReport lambda_sweep(const ProcessSpec& spec, const OreyProfile& profile,
                         const PhiFunction& phi, const std::vector<double>& deltas,
                         std::size_t t_points, std::size_t h_points, double T) {
  validate(spec);
  if (t_points < 16 || h_points < 16) throw SizeError("grid resolutions must be at least 16");
  if (const auto* b = std::get_if<FBridge>(&spec))
    if (std::abs(b->horizon - T) > 1e-12 * T) throw DomainError("bridge horizon must equal T");
  for (double d : deltas)
    if (!(d > 0 && d <= T / 4)) throw DomainError("delta must lie in (0, T/4]");

  SweepReport report;
  report.rows.resize(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double delta = deltas[i];
    const double t_lo = phi(delta);
    if (!(t_lo < T - delta)) throw DomainError("phi(delta) exceeds T - delta");
    const auto ts = geometric_grid(t_lo, T - delta, t_points);
    const auto hs = geometric_grid(delta * 1e-3, delta, h_points);
    std::vector<double> worst(ts.size(), 0.0);
    parallel_for(ts.size(), [&](std::size_t a) {
      const double t = ts[a];
      for (double h : hs) {
        // measure against the representable increment so exact kernels give exactly 0
        const double u = std::min(t + h, T);
        const double he = u - t;
        const double ratio = incremental_variance(spec, t, u) /
                             (profile.kappa * profile.kappa * abs_pow(he, 2 * profile.gamma));
        worst[a] = std::max(worst[a], std::abs(std::sqrt(ratio) - 1));
      }
    });
    SweepRow& row = report.rows[i];
    row.delta = delta;
    row.lambda = *std::max_element(worst.begin(), worst.end());
    row.bound = lambda_bound(spec, phi, delta, T);
    row.pass = row.lambda <= row.bound;
  }
  return report;
}

double remark_constant(double H) {
  return H * (2 * H - 1) * (std::pow(2.0, 2 * H - 1) - 1) * std::pow(3.0, 2 * H - 2);
}

RemarkReport remark_check(double H, const std::vector<double>& deltas, std::size_t s_points,
                          std::size_t h_points, double T) {
  if (!(H > 0.5 && H < 1)) throw DomainError("remark check needs H in (1/2, 1)");
  if (s_points < 2 || h_points < 2) throw SizeError("grid resolutions must be at least 2");
  const double e = 2 * H;
  auto f = [&](double s, double h) {
    return std::pow(2 * s + h, e) - std::pow(2.0, e - 1) * (std::pow(s, e) + std::pow(s + h, e));
  };
  RemarkReport report;
  report.H = H;
  const double c = remark_constant(H);
  for (double delta : deltas) {
    if (!(delta > 0 && delta < T / 2)) throw DomainError("delta must lie in (0, T/2)");
    const auto ss = geometric_grid(delta, T - delta, s_points);
    const auto hs = geometric_grid(delta * 1e-3, delta, h_points);
    double sup = 0;
    for (double s : ss)
      for (double h : hs) sup = std::max(sup, std::abs(f(s, h)) / std::pow(h, e));
    report.rows.push_back({delta, sup, c, sup >= (1 - kRemarkGridTolerance) * c});
  }
  return report;
}

std::vector<LogRatioRow> log_ratio_profile(const ProcessSpec& spec, const PhiFunction& phi,
                                           const std::vector<double>& h_grid,
                                           std::size_t s_points, double T) {
  validate(spec);
  if (s_points < 2) throw SizeError("s grid needs at least 2 points");
  for (double h : h_grid)
    if (!(h > 0 && h < 1)) throw DomainError("h must lie in (0, 1)");
  std::vector<LogRatioRow> rows(h_grid.size());
  parallel_for(h_grid.size(), [&](std::size_t i) {
    const double h = h_grid[i];
    const double s_lo = phi(h);
    if (!(s_lo < T - h)) throw DomainError("phi(h) exceeds T - h");
    const double lnh = std::log(h);
    LogRatioRow row;
    row.h = h;
    row.sup = -std::numeric_limits<double>::infinity();
    row.inf = std::numeric_limits<double>::infinity();
    for (double s : geometric_grid(s_lo, T - h, s_points)) {
      const double r = 0.5 * std::log(incremental_variance(spec, s, s + h)) / lnh;
      row.sup = std::max(row.sup, r);
      row.inf = std::min(row.inf, r);
    }
    row.origin = 0.5 * std::log(incremental_variance(spec, 0.0, h)) / lnh;
    rows[i] = row;
  });
  return rows;
}

}  // namespace orey
