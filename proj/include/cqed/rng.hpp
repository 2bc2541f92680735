// Philox4x32-10 counter-based random number generator (Salmon et al.,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11). Stateless block
// function plus a per-stream view: every (seed, stream, draw index) maps to
// the same value on every platform and thread schedule, which is what makes
// trajectory ensembles reproducible under parallel execution.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "cqed/constants.hpp"

namespace cqed {

struct Philox4x32 {
  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      std::uint64_t p0 = std::uint64_t(kMult0) * ctr[0];
      std::uint64_t p1 = std::uint64_t(kMult1) * ctr[2];
      Counter next;
      next[0] = std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0];
      next[1] = std::uint32_t(p1);
      next[2] = std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1];
      next[3] = std::uint32_t(p0);
      ctr = next;
    }
    return ctr;
  }
};

// Stream view: the 64-bit stream id sits in the upper counter words, the
// per-stream draw counter in the lower ones. Draws come in blocks of two
// 64-bit words.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        stream_(stream) {}

  std::uint64_t next_u64() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    Philox4x32::Counter ctr = {std::uint32_t(draw_), std::uint32_t(draw_ >> 32),
                               std::uint32_t(stream_),
                               std::uint32_t(stream_ >> 32)};
    ++draw_;
    auto out = Philox4x32::block(ctr, key_);
    spare_ = (std::uint64_t(out[2]) << 32) | out[3];
    have_spare_ = true;
    return (std::uint64_t(out[0]) << 32) | out[1];
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a jump threshold.
  double uniform_positive() { return 1.0 - uniform(); }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform_positive();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t draw_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace cqed
