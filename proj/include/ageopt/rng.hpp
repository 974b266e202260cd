#pragma once

#include <cmath>
#include <cstdint>

namespace ageopt {

// Counter-based generator: the n-th output of stream s under seed k is a pure
// function of (k, s, n), so independent consumers can share one seed without
// coordinating, and replays are exact. Core mixer is splitmix64.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix(mix(seed + kGolden) ^ mix(stream * kGolden + 1))) {}

  std::uint64_t next_u64() { return mix(base_ + (++counter_) * kGolden); }

  // uniform in [0, 1), 53-bit resolution
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller; second variate of each pair is cached
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // exponential with unit rate
  double next_exp() { return -std::log1p(-next_unit()); }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ageopt
