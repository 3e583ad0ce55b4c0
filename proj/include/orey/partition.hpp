#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace orey {

/// Strictly increasing grid 0 = t_0 < t_1 < ... < t_N = T with N >= 3.
/// Stored as absolute times.
class Partition {
 public:
  /// Validates and takes ownership of `times`.
  explicit Partition(std::vector<double> times);

  std::span<const double> times() const { return times_; }
  double time(std::size_t k) const { return times_[k]; }
  double horizon() const { return times_.back(); }
  /// Number of steps N (point count minus one).
  std::size_t steps() const { return times_.size() - 1; }
  std::size_t size() const { return times_.size(); }
  /// Delta_k t = t_k - t_{k-1}, for k = 1..N.
  double step(std::size_t k) const { return times_[k] - times_[k - 1]; }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<double> times_;
};

struct MeshStats {
  double m_n = 0;      // largest step
  double p_n = 0;      // smallest step
  double c_ratio = 1;  // m_n / p_n
};

/// Step function l(t) built from the ratios l_k = Delta_k t / Delta_{k+1} t,
/// k = 1..N-1. values[i] holds on [breakpoints[i], breakpoints[i+1]) with the
/// last piece running to T. l_k lives on [t_k, t_{k+1}); the first piece is
/// extended down to 0 so the function covers the whole of [0, T].
struct RatioProfile {
  std::vector<double> breakpoints;
  std::vector<double> values;
  double horizon = 0;
  /// Distinct ratio values (relative tolerance 1e-9), ascending.
  std::vector<double> range;
};

Partition make_regular(std::size_t N, double T);

/// Steps alternate h, alpha*h, h, alpha*h, ... (`pairs` pairs summing to T).
Partition make_alternating(double alpha, std::size_t pairs, double T);

/// Steps drawn uniformly from [1, c_max] and rescaled to sum to T.
Partition make_perturbed(std::size_t N, double T, double c_max, std::uint64_t seed);

/// Keeps every stride-th point. Requires N % stride == 0.
Partition subsample(const Partition& p, std::size_t stride);

MeshStats mesh_stats(const Partition& p);
RatioProfile ratio_profile(const Partition& p);

/// True when every time of `sub` is also a time of `super`.
bool is_nested(const Partition& sub, const Partition& super);

/// Position of each time of `sub` inside `super`; throws NestingError.
std::vector<std::size_t> embedding_indices(const Partition& sub, const Partition& super);

/// True when the partition is make_regular(N, T) up to 1e-12 relative.
bool is_regular(const Partition& p);

/// Single-column CSV with header "t", 17 significant digits.
void write_csv(std::ostream& os, const Partition& p);
Partition read_partition_csv(std::istream& is);

}  // namespace orey
