#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace walkrange {

// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return c;
  }
};

enum class Direction : std::uint32_t { forward = 0, backward = 1 };

// Random-access substream: one per (seed, increment index, trajectory, lane).
// The counter layout is (index lo, index hi, trajectory, lane<<31 | block),
// so the draws behind increment k never depend on how many draws any other
// increment consumed. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(std::uint64_t seed, std::uint64_t index, std::uint32_t trajectory,
             std::uint32_t lane = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                 trajectory, (lane & 1u) << 31} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (used_ == 4) refill();
    return buffer_[used_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = (*this)();
    return (hi << 32) | (*this)();
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection, n > 0.
  std::uint64_t below(std::uint64_t n) {
    if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    while (true) {
      const std::uint64_t v = next_u64();
      if (v < limit) return v % n;
    }
  }

 private:
  void refill() {
    buffer_ = Philox4x32::block(counter_, key_);
    ++counter_[3];
    used_ = 0;
  }

  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

// Increment stream of one trajectory: increment k >= 0 is omega(k) on the
// forward lane; omega(-k-1) lives on the backward lane at index k.
inline CounterRng increment_rng(std::uint64_t seed, std::uint32_t trajectory, std::int64_t k) {
  if (k >= 0) return CounterRng(seed, static_cast<std::uint64_t>(k), trajectory, 0);
  return CounterRng(seed, static_cast<std::uint64_t>(-(k + 1)), trajectory, 1);
}

}  // namespace walkrange
