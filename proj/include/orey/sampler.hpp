#pragma once

// Exact Gaussian path simulation at the points of a partition.

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "orey/frac_ou.hpp"
#include "orey/partition.hpp"
#include "orey/process.hpp"
#include "orey/rng.hpp"

namespace orey {

enum class SampleMethod {
  cholesky,
  circulant,
  circulant_fallback,  // embedding had negative eigenvalues, Cholesky used
};

const char* to_string(SampleMethod m);

struct Path {
  Partition partition;
  std::vector<double> values;
  SeedPolicy seeds;
  ProcessSpec spec;
  SampleMethod method = SampleMethod::cholesky;
  /// False only for raw (uncentered) fractional O-U paths with x0 != 0.
  bool centered = true;
};

/// Relative diagonal jitters tried in order before giving up.
inline constexpr double kJitterSchedule[] = {0.0, 1e-14, 1e-12, 1e-10};

/// Lower Cholesky factor of a covariance over the non-pinned points of a
/// partition. Pinned points (t = 0, and t = T for the bridge) are exactly 0.
class ExactSampler {
 public:
  ExactSampler(ProcessSpec spec, Partition partition);

  Path draw(SeedPolicy seeds) const;
  /// Values only; `out` has one entry per partition point.
  void draw_into(SeedPolicy seeds, std::span<double> out) const;

  const Partition& partition() const { return partition_; }
  double jitter() const { return jitter_; }

 private:
  ProcessSpec spec_;
  Partition partition_;
  std::vector<std::size_t> free_;
  Eigen::MatrixXd factor_;
  double jitter_ = 0;
};

/// fBm on a regular grid through circulant embedding of fractional Gaussian
/// noise (O(N log N) per path).
class CirculantFbmSampler {
 public:
  CirculantFbmSampler(double H, std::size_t N, double T);

  Path draw(SeedPolicy seeds) const;
  void draw_into(SeedPolicy seeds, std::span<double> out) const;

  bool fell_back() const { return fallback_ != nullptr; }
  const Partition& partition() const { return partition_; }

 private:
  double H_;
  Partition partition_;
  std::vector<double> sqrt_eigen_;  // sqrt(lambda_k / (2N))
  std::unique_ptr<ExactSampler> fallback_;
};

/// Driver fBm sampler over an arbitrary node set: circulant when the nodes
/// form a regular grid, Cholesky otherwise.
class FbmSampler {
 public:
  FbmSampler(double H, const Partition& nodes);

  void draw_into(SeedPolicy seeds, std::span<double> out) const;
  SampleMethod method() const;
  const Partition& partition() const;

 private:
  std::variant<CirculantFbmSampler, ExactSampler> impl_;
};

/// Uncentered fractional O-U path plus the driving fBm at the same points.
struct FracOuDraw {
  Path path;
  std::vector<double> driver;
};

class FracOuSampler {
 public:
  FracOuSampler(FracOU spec, Partition partition);

  FracOuDraw draw(SeedPolicy seeds) const;
  const Partition& partition() const { return partition_; }
  SampleMethod method() const { return driver_.method(); }

 private:
  FracOU spec_;
  Partition partition_;
  FracOuGrid grid_;
  FbmSampler driver_;
};

class BridgeSampler {
 public:
  BridgeSampler(FBridge spec, Partition partition);

  Path draw(SeedPolicy seeds) const;
  SampleMethod method() const { return driver_.method(); }

 private:
  FBridge spec_;
  Partition partition_;
  std::vector<double> pin_weight_;
  FbmSampler driver_;
};

/// Picks the appropriate sampler for a family and partition. Paths returned
/// by draw() are centered (fractional O-U mean removed).
class Sampler {
 public:
  Sampler(const ProcessSpec& spec, const Partition& partition);

  Path draw(SeedPolicy seeds) const;
  SampleMethod method() const;

 private:
  std::variant<CirculantFbmSampler, ExactSampler, FracOuSampler, BridgeSampler> impl_;
};

/// One-shot exact draw from the Gaussian law with matrix covariance(t_i, t_j).
Path sample_exact(const ProcessSpec& spec, const Partition& p, SeedPolicy seeds);

/// Regular-grid fBm fast path.
Path sample_fbm_fast(double H, std::size_t N, double T, SeedPolicy seeds);

enum class Centering { raw, centered };

/// Fractional O-U path; raw keeps the mean x0 e^{-mu t}.
Path sample_frac_ou(const FracOU& spec, const Partition& p, SeedPolicy seeds,
                    Centering centering = Centering::raw);

Path sample_bridge(const FBridge& spec, const Partition& p, SeedPolicy seeds);

/// Subtracts x0 e^{-mu t} from a raw fractional O-U path (no-op otherwise).
Path center(Path path);

/// Covariance matrix [covariance(t_i, t_j)] of a family on a set of times.
/// For FracOU the partition-consistent refined-grid kernel is used.
Eigen::MatrixXd covariance_matrix(const ProcessSpec& spec, std::span<const double> times);

}  // namespace orey
