#include "orey/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "orey/error.hpp"
#include "orey/fft.hpp"
#include "orey/parallel.hpp"

namespace orey {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Index = Eigen::Index;

// Fills the upper triangle with f(i, j) and mirrors it.
template <class F>
Eigen::MatrixXd symmetric_matrix(std::size_t n, F f) {
  Eigen::MatrixXd C(static_cast<Index>(n), static_cast<Index>(n));
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) C(static_cast<Index>(i), static_cast<Index>(j)) = f(i, j);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      C(static_cast<Index>(i), static_cast<Index>(j)) = C(static_cast<Index>(j), static_cast<Index>(i));
  return C;
}

std::vector<double> powers(std::span<const double> t, double e) {
  std::vector<double> p(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) p[i] = abs_pow(t[i], e);
  return p;
}

bool is_pinned(const ProcessSpec& spec, double t) {
  if (t == 0.0) return true;
  if (const auto* b = std::get_if<FBridge>(&spec)) return t == b->horizon;
  return false;
}

void check_bridge_horizon(const FBridge& spec, const Partition& p) {
  if (std::abs(p.horizon() - spec.horizon) > 1e-12 * spec.horizon)
    throw DomainError("partition horizon must equal the bridge horizon");
}

}  // namespace

const char* to_string(SampleMethod m) {
  switch (m) {
    case SampleMethod::cholesky: return "cholesky";
    case SampleMethod::circulant: return "circulant";
    case SampleMethod::circulant_fallback: return "circulant_fallback";
  }
  return "unknown";
}

Eigen::MatrixXd covariance_matrix(const ProcessSpec& spec, std::span<const double> times) {
  validate(spec);
  for (double t : times)
    if (!std::isfinite(t) || t < 0) throw DomainError("times must be finite and >= 0");
  const std::size_t n = times.size();
  return std::visit(
      Overloaded{
          [&](const FBm& p) {
            const double e = 2 * p.H;
            const auto pw = powers(times, e);
            return symmetric_matrix(n, [&](std::size_t i, std::size_t j) {
              return 0.5 * (pw[i] + pw[j] - abs_pow(times[i] - times[j], e));
            });
          },
          [&](const SubFBm& p) {
            const double e = 2 * p.H;
            const auto pw = powers(times, e);
            return symmetric_matrix(n, [&](std::size_t i, std::size_t j) {
              return pw[i] + pw[j] -
                     0.5 * (abs_pow(times[i] + times[j], e) + abs_pow(times[i] - times[j], e));
            });
          },
          [&](const BiFBm& p) {
            const double e = 2 * p.H;
            const auto pw = powers(times, e);
            const double scale = std::pow(2.0, -p.K);
            return symmetric_matrix(n, [&](std::size_t i, std::size_t j) {
              return scale * (std::pow(pw[i] + pw[j], p.K) - abs_pow(times[i] - times[j], e * p.K));
            });
          },
          [&](const FracOU& p) {
            // the refined grid needs the origin as its first node
            if (!times.empty() && times.front() == 0.0) return frac_ou_covariance_matrix(p, times);
            std::vector<double> with_origin{0.0};
            with_origin.insert(with_origin.end(), times.begin(), times.end());
            Eigen::MatrixXd full = frac_ou_covariance_matrix(p, with_origin);
            return Eigen::MatrixXd(full.bottomRightCorner(static_cast<Index>(n), static_cast<Index>(n)));
          },
          [&](const FBridge& p) {
            for (double t : times)
              if (t > p.horizon) throw DomainError("bridge times must lie in [0, horizon]");
            const double e = 2 * p.H;
            const auto pw = powers(times, e);
            const double T2H = abs_pow(p.horizon, e);
            std::vector<double> g(n);
            for (std::size_t i = 0; i < n; ++i) g[i] = pw[i] + T2H - abs_pow(times[i] - p.horizon, e);
            return symmetric_matrix(n, [&](std::size_t i, std::size_t j) {
              return 0.5 * (pw[i] + pw[j] - abs_pow(times[i] - times[j], e)) - g[i] * g[j] / (4 * T2H);
            });
          },
      },
      spec);
}

// ---------------------------------------------------------------------------

ExactSampler::ExactSampler(ProcessSpec spec, Partition partition)
    : spec_(std::move(spec)), partition_(std::move(partition)) {
  validate(spec_);
  if (const auto* b = std::get_if<FBridge>(&spec_)) {
    for (double t : partition_.times())
      if (t > b->horizon) throw DomainError("bridge times must lie in [0, horizon]");
  }
  for (std::size_t i = 0; i < partition_.size(); ++i)
    if (!is_pinned(spec_, partition_.time(i))) free_.push_back(i);

  std::vector<double> free_times;
  free_times.reserve(free_.size());
  for (std::size_t i : free_) free_times.push_back(partition_.time(i));
  Eigen::MatrixXd cov;
  if (std::holds_alternative<FracOU>(spec_)) {
    // the refined-grid kernel depends on the whole partition
    const Eigen::MatrixXd full = covariance_matrix(spec_, partition_.times());
    cov.resize(static_cast<Index>(free_.size()), static_cast<Index>(free_.size()));
    for (std::size_t a = 0; a < free_.size(); ++a)
      for (std::size_t b = 0; b < free_.size(); ++b)
        cov(static_cast<Index>(a), static_cast<Index>(b)) =
            full(static_cast<Index>(free_[a]), static_cast<Index>(free_[b]));
  } else {
    cov = covariance_matrix(spec_, free_times);
  }

  const double max_diag = cov.size() > 0 ? cov.diagonal().maxCoeff() : 0.0;
  Index pivot = -1;
  for (double lambda : kJitterSchedule) {
    Eigen::MatrixXd work = cov;
    work.diagonal().array() += lambda * max_diag;
    pivot = Eigen::internal::llt_inplace<double, Eigen::Lower>::blocked(work);
    if (pivot < 0) {
      factor_ = work.triangularView<Eigen::Lower>();
      jitter_ = lambda;
      return;
    }
  }
  throw NumericalPsdError("covariance matrix is not positive definite after jitter " +
                              std::to_string(kJitterSchedule[std::size(kJitterSchedule) - 1]) +
                              " (failing pivot " + std::to_string(pivot) + ")",
                          pivot);
}

void ExactSampler::draw_into(SeedPolicy seeds, std::span<double> out) const {
  if (out.size() != partition_.size()) throw LengthMismatchError("output has the wrong length");
  NormalStream stream(seeds);
  Eigen::VectorXd z(static_cast<Index>(free_.size()));
  for (Index i = 0; i < z.size(); ++i) z(i) = stream.next();
  const Eigen::VectorXd x = factor_.triangularView<Eigen::Lower>() * z;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t a = 0; a < free_.size(); ++a) out[free_[a]] = x(static_cast<Index>(a));
}

Path ExactSampler::draw(SeedPolicy seeds) const {
  Path path{partition_, std::vector<double>(partition_.size()), seeds, spec_, SampleMethod::cholesky, true};
  draw_into(seeds, path.values);
  return path;
}

// ---------------------------------------------------------------------------

CirculantFbmSampler::CirculantFbmSampler(double H, std::size_t N, double T)
    : H_(H), partition_(make_regular(N, T)) {
  validate(FBm{H});
  const double h = T / static_cast<double>(N);
  const std::size_t M = 2 * N;
  std::vector<std::complex<double>> c(M, {0.0, 0.0});
  for (std::size_t k = 0; k <= N; ++k) c[k] = fgn_autocovariance(H, h, static_cast<long>(k));
  for (std::size_t k = 1; k < N; ++k) c[M - k] = c[k];
  fft::forward(c);
  double max_eig = 0, min_eig = 0;
  for (const auto& v : c) {
    max_eig = std::max(max_eig, v.real());
    min_eig = std::min(min_eig, v.real());
  }
  if (min_eig < -1e-9 * max_eig) {
    fallback_ = std::make_unique<ExactSampler>(FBm{H}, partition_);
    return;
  }
  sqrt_eigen_.resize(M);
  for (std::size_t k = 0; k < M; ++k)
    sqrt_eigen_[k] = std::sqrt(std::max(c[k].real(), 0.0) / static_cast<double>(M));
}

void CirculantFbmSampler::draw_into(SeedPolicy seeds, std::span<double> out) const {
  if (fallback_) {
    fallback_->draw_into(seeds, out);
    return;
  }
  const std::size_t N = partition_.steps();
  if (out.size() != N + 1) throw LengthMismatchError("output has the wrong length");
  NormalStream stream(seeds);
  std::vector<std::complex<double>> w(sqrt_eigen_.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double re = stream.next();
    const double im = stream.next();
    w[k] = {sqrt_eigen_[k] * re, sqrt_eigen_[k] * im};
  }
  fft::forward(w);
  out[0] = 0.0;
  double acc = 0.0;
  for (std::size_t k = 1; k <= N; ++k) {
    acc += w[k - 1].real();
    out[k] = acc;
  }
}

Path CirculantFbmSampler::draw(SeedPolicy seeds) const {
  Path path{partition_, std::vector<double>(partition_.size()), seeds, FBm{H_},
            fallback_ ? SampleMethod::circulant_fallback : SampleMethod::circulant, true};
  draw_into(seeds, path.values);
  return path;
}

// ---------------------------------------------------------------------------

namespace {

std::variant<CirculantFbmSampler, ExactSampler> make_fbm_impl(double H, const Partition& nodes) {
  if (is_regular(nodes))
    return std::variant<CirculantFbmSampler, ExactSampler>(
        std::in_place_type<CirculantFbmSampler>, H, nodes.steps(), nodes.horizon());
  return std::variant<CirculantFbmSampler, ExactSampler>(std::in_place_type<ExactSampler>, FBm{H},
                                                         nodes);
}

}  // namespace

FbmSampler::FbmSampler(double H, const Partition& nodes) : impl_(make_fbm_impl(H, nodes)) {}

void FbmSampler::draw_into(SeedPolicy seeds, std::span<double> out) const {
  std::visit([&](const auto& s) { s.draw_into(seeds, out); }, impl_);
}

SampleMethod FbmSampler::method() const {
  return std::visit(Overloaded{
                        [](const CirculantFbmSampler& s) {
                          return s.fell_back() ? SampleMethod::circulant_fallback
                                               : SampleMethod::circulant;
                        },
                        [](const ExactSampler&) { return SampleMethod::cholesky; },
                    },
                    impl_);
}

const Partition& FbmSampler::partition() const {
  return std::visit([](const auto& s) -> const Partition& { return s.partition(); }, impl_);
}

// ---------------------------------------------------------------------------

FracOuSampler::FracOuSampler(FracOU spec, Partition partition)
    : spec_(spec),
      partition_(std::move(partition)),
      grid_(spec_, partition_.times(), spec_.refine_factor),
      driver_(spec_.H, Partition(std::vector<double>(grid_.nodes().begin(), grid_.nodes().end()))) {}

FracOuDraw FracOuSampler::draw(SeedPolicy seeds) const {
  std::vector<double> b(grid_.nodes().size());
  driver_.draw_into(seeds, b);
  std::vector<double> y = grid_.apply(b);
  std::vector<double> driver(partition_.size());
  for (std::size_t i = 0; i < partition_.size(); ++i) {
    driver[i] = b[grid_.node_index(i)];
    y[i] += spec_.x0 * std::exp(-spec_.mu * partition_.time(i));
  }
  return FracOuDraw{Path{partition_, std::move(y), seeds, spec_, driver_.method(), spec_.x0 == 0.0},
                    std::move(driver)};
}

// ---------------------------------------------------------------------------

BridgeSampler::BridgeSampler(FBridge spec, Partition partition)
    : spec_(spec), partition_(std::move(partition)), driver_(spec.H, partition_) {
  validate(spec_);
  check_bridge_horizon(spec_, partition_);
  const double e = 2 * spec_.H;
  const double T = spec_.horizon;
  const double T2H = abs_pow(T, e);
  pin_weight_.resize(partition_.size());
  for (std::size_t i = 0; i < partition_.size(); ++i) {
    const double t = partition_.time(i);
    pin_weight_[i] = (abs_pow(t, e) + T2H - abs_pow(t - T, e)) / (2 * T2H);
  }
}

Path BridgeSampler::draw(SeedPolicy seeds) const {
  Path path{partition_, std::vector<double>(partition_.size()), seeds, spec_, driver_.method(), true};
  driver_.draw_into(seeds, path.values);
  const double end = path.values.back();
  for (std::size_t i = 0; i < path.values.size(); ++i) path.values[i] -= pin_weight_[i] * end;
  path.values.front() = 0.0;
  path.values.back() = 0.0;
  return path;
}

// ---------------------------------------------------------------------------

namespace {

using SamplerImpl = std::variant<CirculantFbmSampler, ExactSampler, FracOuSampler, BridgeSampler>;

SamplerImpl make_sampler_impl(const ProcessSpec& spec, const Partition& p) {
  validate(spec);
  if (const auto* f = std::get_if<FBm>(&spec)) {
    if (is_regular(p)) return SamplerImpl(std::in_place_type<CirculantFbmSampler>, f->H, p.steps(), p.horizon());
    return SamplerImpl(std::in_place_type<ExactSampler>, spec, p);
  }
  if (const auto* o = std::get_if<FracOU>(&spec)) return SamplerImpl(std::in_place_type<FracOuSampler>, *o, p);
  if (const auto* b = std::get_if<FBridge>(&spec)) return SamplerImpl(std::in_place_type<BridgeSampler>, *b, p);
  return SamplerImpl(std::in_place_type<ExactSampler>, spec, p);
}

}  // namespace

Sampler::Sampler(const ProcessSpec& spec, const Partition& partition)
    : impl_(make_sampler_impl(spec, partition)) {}

Path Sampler::draw(SeedPolicy seeds) const {
  return std::visit(Overloaded{
                        [&](const FracOuSampler& s) { return center(s.draw(seeds).path); },
                        [&](const auto& s) { return s.draw(seeds); },
                    },
                    impl_);
}

SampleMethod Sampler::method() const {
  return std::visit(Overloaded{
                        [](const CirculantFbmSampler& s) {
                          return s.fell_back() ? SampleMethod::circulant_fallback
                                               : SampleMethod::circulant;
                        },
                        [](const ExactSampler&) { return SampleMethod::cholesky; },
                        [](const auto& s) { return s.method(); },
                    },
                    impl_);
}

// ---------------------------------------------------------------------------

Path sample_exact(const ProcessSpec& spec, const Partition& p, SeedPolicy seeds) {
  return ExactSampler(spec, p).draw(seeds);
}

Path sample_fbm_fast(double H, std::size_t N, double T, SeedPolicy seeds) {
  return CirculantFbmSampler(H, N, T).draw(seeds);
}

Path sample_frac_ou(const FracOU& spec, const Partition& p, SeedPolicy seeds, Centering centering) {
  Path path = FracOuSampler(spec, p).draw(seeds).path;
  return centering == Centering::centered ? center(std::move(path)) : path;
}

Path sample_bridge(const FBridge& spec, const Partition& p, SeedPolicy seeds) {
  return BridgeSampler(spec, p).draw(seeds);
}

Path center(Path path) {
  if (path.centered) return path;
  if (const auto* o = std::get_if<FracOU>(&path.spec)) {
    for (std::size_t i = 0; i < path.values.size(); ++i)
      path.values[i] -= o->x0 * std::exp(-o->mu * path.partition.time(i));
  }
  path.centered = true;
  return path;
}

}  // namespace orey
