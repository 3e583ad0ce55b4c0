#include "orey/rng.hpp"

#include <cmath>
#include <numbers>

#include "orey/error.hpp"

namespace orey {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

NormalStream::NormalStream(SeedPolicy seeds, std::uint32_t lane)
    : key_{static_cast<std::uint32_t>(seeds.master_seed),
           static_cast<std::uint32_t>(seeds.master_seed >> 32)},
      replica_(seeds.replica_index),
      lane_(lane) {}

std::array<std::uint32_t, 4> NormalStream::next_block() {
  if (block_ > 0xFFFFFFFFull) throw SizeError("random stream exhausted (2^32 blocks)");
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_), lane_,
                                static_cast<std::uint32_t>(replica_),
                                static_cast<std::uint32_t>(replica_ >> 32)};
  ++block_;
  return Philox4x32::block(ctr, key_);
}

double NormalStream::uniform() {
  if (pending_used_ >= 4) {
    pending_ = next_block();
    pending_used_ = 0;
  }
  const std::uint64_t bits = (static_cast<std::uint64_t>(pending_[pending_used_]) << 32) |
                             pending_[pending_used_ + 1];
  pending_used_ += 2;
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

double NormalStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

void NormalStream::fill(std::span<double> out) {
  for (auto& x : out) x = next();
}

}  // namespace orey
