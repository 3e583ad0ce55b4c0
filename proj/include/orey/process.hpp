#pragma once

// Gaussian process families: covariance kernels, incremental variances and
// the (gamma, kappa) scaling profile of each family.

#include <string>
#include <variant>

namespace orey {

/// Fractional Brownian motion with Hurst index H.
struct FBm {
  double H = 0.5;
};

/// Sub-fractional Brownian motion, covariance
/// s^{2H} + t^{2H} - ((s+t)^{2H} + |s-t|^{2H}) / 2.
struct SubFBm {
  double H = 0.5;
};

/// Bifractional Brownian motion, covariance
/// 2^{-K} ((t^{2H} + s^{2H})^K - |t-s|^{2HK}).
struct BiFBm {
  double H = 0.5;
  double K = 1.0;
};

/// Fractional Ornstein-Uhlenbeck process of the first kind,
/// dX = -mu X dt + theta dB^H, X_0 = x0. The stochastic integral is
/// discretized on a grid refine_factor times finer than the observation
/// partition (trapezoid rule on the integration-by-parts form).
struct FracOU {
  double H = 0.5;
  double mu = 1.0;
  double theta = 1.0;
  double x0 = 0.0;
  int refine_factor = 8;
};

/// Fractional Brownian bridge pinned to zero at `horizon`.
struct FBridge {
  double H = 0.5;
  double horizon = 1.0;
};

using ProcessSpec = std::variant<FBm, SubFBm, BiFBm, FracOU, FBridge>;

/// Orey index gamma and scale kappa: sigma_X(t, t+h) ~ kappa h^gamma.
struct OreyProfile {
  double gamma = 0.5;
  double kappa = 1.0;
};

/// Throws ParameterError when the parameters violate the family's invariants.
void validate(const ProcessSpec& spec);

/// Short lowercase family tag: fbm, subfbm, bifbm, fou, bridge.
std::string family_name(const ProcessSpec& spec);

/// Hurst parameter H of the family (the driving fBm for fou/bridge).
double hurst(const ProcessSpec& spec);

/// Covariance of the centered process. FracOU has no closed form and is
/// evaluated by quadrature (see frac_ou.hpp); it is orders of magnitude
/// slower than the closed-form families.
double covariance(const ProcessSpec& spec, double s, double t);

/// E[X(t) - X(s)]^2. Closed forms are used where available.
double incremental_variance(const ProcessSpec& spec, double s, double t);

OreyProfile orey_profile(const ProcessSpec& spec);

/// Limit of E(X_{t+h} - 2X_t + X_{t-h})^2 / h^{2 gamma}. Only the fBm and
/// sub-fBm families are supported; both give the constant 4 - 2^{2H}.
double g0_function(const ProcessSpec& spec, double t);

/// |x|^e with |x| < 1e-300 mapped to 0.
double abs_pow(double x, double e);

}  // namespace orey
