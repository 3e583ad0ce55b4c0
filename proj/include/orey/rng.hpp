#pragma once

// Counter-based random numbers (Philox-4x32-10). A stream is addressed by
// (master seed, replica index) and draws are a pure function of that address
// and the draw position, so replicas are reproducible regardless of the
// order or thread they run on.

#include <array>
#include <cstdint>
#include <span>

namespace orey {

struct SeedPolicy {
  std::uint64_t master_seed = 0;
  std::uint64_t replica_index = 0;

  bool operator==(const SeedPolicy&) const = default;
};

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// Standard normal variates (Box-Muller over Philox uniforms).
class NormalStream {
 public:
  explicit NormalStream(SeedPolicy seeds, std::uint32_t lane = 0);

  double next();
  void fill(std::span<double> out);
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

 private:
  std::array<std::uint32_t, 4> next_block();

  Philox4x32::Key key_{};
  std::uint64_t replica_ = 0;
  std::uint32_t lane_ = 0;
  std::uint64_t block_ = 0;
  double cached_ = 0;
  bool has_cached_ = false;
  std::array<std::uint32_t, 4> pending_{};
  int pending_used_ = 4;
};

}  // namespace orey
