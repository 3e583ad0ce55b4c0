#include "orey/process.hpp"

#include <cmath>
#include <string>

#include "orey/error.hpp"
#include "orey/frac_ou.hpp"

namespace orey {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw ParameterError("H must lie in (0, 1)");
}

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and >= 0");
}

double fbm_cov(double H, double s, double t) {
  const double e = 2 * H;
  return 0.5 * (abs_pow(s, e) + abs_pow(t, e) - abs_pow(t - s, e));
}

// g(t, T) = t^{2H} + T^{2H} - |t - T|^{2H}
double bridge_pin(double H, double T, double t) {
  const double e = 2 * H;
  return abs_pow(t, e) + abs_pow(T, e) - abs_pow(t - T, e);
}

}  // namespace

double abs_pow(double x, double e) {
  const double a = std::abs(x);
  if (a < 1e-300) return 0.0;
  return std::pow(a, e);
}

void validate(const ProcessSpec& spec) {
  std::visit(Overloaded{
                 [](const FBm& p) { check_hurst(p.H); },
                 [](const SubFBm& p) { check_hurst(p.H); },
                 [](const BiFBm& p) {
                   check_hurst(p.H);
                   if (!(p.K > 0.0 && p.K <= 1.0)) throw ParameterError("K must lie in (0, 1]");
                 },
                 [](const FracOU& p) {
                   check_hurst(p.H);
                   if (!(p.mu > 0.0) || !std::isfinite(p.mu)) throw ParameterError("mu must be > 0");
                   if (!(p.theta > 0.0) || !std::isfinite(p.theta))
                     throw ParameterError("theta must be > 0");
                   if (!std::isfinite(p.x0)) throw ParameterError("x0 must be finite");
                   if (p.refine_factor < 1) throw ParameterError("refine_factor must be >= 1");
                 },
                 [](const FBridge& p) {
                   check_hurst(p.H);
                   if (!(p.horizon > 0.0) || !std::isfinite(p.horizon))
                     throw ParameterError("bridge horizon must be > 0");
                 },
             },
             spec);
}

std::string family_name(const ProcessSpec& spec) {
  return std::visit(Overloaded{
                        [](const FBm&) { return std::string("fbm"); },
                        [](const SubFBm&) { return std::string("subfbm"); },
                        [](const BiFBm&) { return std::string("bifbm"); },
                        [](const FracOU&) { return std::string("fou"); },
                        [](const FBridge&) { return std::string("bridge"); },
                    },
                    spec);
}

double hurst(const ProcessSpec& spec) {
  return std::visit([](const auto& p) { return p.H; }, spec);
}

double covariance(const ProcessSpec& spec, double s, double t) {
  validate(spec);
  check_time(s);
  check_time(t);
  return std::visit(
      Overloaded{
          [&](const FBm& p) { return fbm_cov(p.H, s, t); },
          [&](const SubFBm& p) {
            const double e = 2 * p.H;
            return abs_pow(s, e) + abs_pow(t, e) - 0.5 * (abs_pow(s + t, e) + abs_pow(s - t, e));
          },
          [&](const BiFBm& p) {
            const double e = 2 * p.H;
            return std::pow(2.0, -p.K) *
                   (std::pow(abs_pow(t, e) + abs_pow(s, e), p.K) - abs_pow(t - s, e * p.K));
          },
          [&](const FracOU& p) { return frac_ou_covariance(p, s, t); },
          [&](const FBridge& p) {
            if (s > p.horizon || t > p.horizon)
              throw DomainError("bridge times must lie in [0, horizon]");
            const double T2H = abs_pow(p.horizon, 2 * p.H);
            return fbm_cov(p.H, s, t) -
                   bridge_pin(p.H, p.horizon, s) * bridge_pin(p.H, p.horizon, t) / (4 * T2H);
          },
      },
      spec);
}

double incremental_variance(const ProcessSpec& spec, double s, double t) {
  validate(spec);
  check_time(s);
  check_time(t);
  return std::visit(
      Overloaded{
          [&](const FBm& p) { return abs_pow(t - s, 2 * p.H); },
          [&](const SubFBm& p) {
            const double e = 2 * p.H;
            return abs_pow(t - s, e) + abs_pow(s + t, e) -
                   std::pow(2.0, e - 1) * (abs_pow(t, e) + abs_pow(s, e));
          },
          [&](const BiFBm& p) {
            const double e = 2 * p.H;
            const double eK = e * p.K;
            return std::pow(2.0, 1 - p.K) *
                       (abs_pow(t - s, eK) - std::pow(abs_pow(t, e) + abs_pow(s, e), p.K)) +
                   abs_pow(t, eK) + abs_pow(s, eK);
          },
          [&](const FracOU& p) { return frac_ou_incremental_variance(p, s, t); },
          [&](const FBridge& p) {
            if (s > p.horizon || t > p.horizon)
              throw DomainError("bridge times must lie in [0, horizon]");
            const double T2H = abs_pow(p.horizon, 2 * p.H);
            const double dg = bridge_pin(p.H, p.horizon, t) - bridge_pin(p.H, p.horizon, s);
            return abs_pow(t - s, 2 * p.H) - dg * dg / (4 * T2H);
          },
      },
      spec);
}

OreyProfile orey_profile(const ProcessSpec& spec) {
  validate(spec);
  return std::visit(Overloaded{
                        [](const FBm& p) { return OreyProfile{p.H, 1.0}; },
                        [](const SubFBm& p) { return OreyProfile{p.H, 1.0}; },
                        [](const BiFBm& p) {
                          return OreyProfile{p.H * p.K, std::pow(2.0, (1 - p.K) / 2)};
                        },
                        [](const FracOU& p) { return OreyProfile{p.H, p.theta}; },
                        [](const FBridge& p) { return OreyProfile{p.H, 1.0}; },
                    },
                    spec);
}

double g0_function(const ProcessSpec& spec, double t) {
  validate(spec);
  check_time(t);
  if (!std::holds_alternative<FBm>(spec) && !std::holds_alternative<SubFBm>(spec))
    throw NotAvailableError("g0 is only available for the fbm and subfbm families");
  return 4.0 - std::pow(2.0, 2 * hurst(spec));
}

}  // namespace orey
