// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include "tilegen/errors.hpp"

namespace tilegen {

// Uniform randomness source feeding all sampling. The generator is a black
// box to the rest of the library: everything downstream consumes unit_real()
// and uniform_index() only.
//
// Default algorithm is xoshiro256** (shift-register state, multiplicative
// scrambler, period 2^256-1), seeded through splitmix64. Streams are
// separated by the generator's long-jump polynomial (2^192 steps), so
// distinct stream ids cannot overlap within any realistic draw count.

enum class RngAlgorithm : std::uint8_t { xoshiro256ss = 0, splitmix64 = 1 };

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace detail {

inline constexpr std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Maps one raw draw to an index in [0, n); unbiased by rejection of the top
// partial range (Lemire's multiply-shift bound). Exposed as a pure function
// of the raw value so uniformity can be proven by enumerating a small raw
// domain in tests.
template <class UInt, class Wide>
struct BoundedMapResult {
  bool accepted;
  UInt index;
};

template <class UInt, class Wide>
inline BoundedMapResult<UInt, Wide> bounded_map(UInt raw, UInt n) {
  Wide m = Wide(raw) * Wide(n);
  UInt low = UInt(m);
  if (low < n) {
    // (2^bits - n) mod n, computed in UInt arithmetic
    UInt threshold = UInt(UInt(0) - n) % n;
    if (low < threshold) return {false, 0};
  }
  return {true, UInt(m >> std::numeric_limits<UInt>::digits)};
}

class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed = 0,
                         RngAlgorithm algorithm = RngAlgorithm::xoshiro256ss,
                         std::uint64_t stream_id = 0)
      : seed_(seed), algorithm_(algorithm), stream_(stream_id) {
    std::uint64_t sm = seed;
    if (algorithm_ == RngAlgorithm::xoshiro256ss) {
      for (auto& w : state_) w = splitmix64_next(sm);
      for (std::uint64_t k = 0; k < stream_id; ++k) long_jump();
    } else {
      // splitmix64: one 64-bit word of state; streams are decorrelated by
      // mixing the id into the seed (no non-overlap guarantee).
      state_[0] = sm ^ (0x9e3779b97f4a7c15ull * (stream_id + 1));
      splitmix64_next(state_[0]);
    }
  }

  std::uint64_t next_raw() {
    if (algorithm_ == RngAlgorithm::xoshiro256ss) {
      const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
      const std::uint64_t t = state_[1] << 17;
      state_[2] ^= state_[0];
      state_[3] ^= state_[1];
      state_[1] ^= state_[2];
      state_[0] ^= state_[3];
      state_[2] ^= t;
      state_[3] = detail::rotl64(state_[3], 45);
      return result;
    }
    return splitmix64_next(state_[0]);
  }

  // 53 high bits mapped to [0,1). Never returns 1.0: max is (2^53-1)/2^53.
  double unit_real() { return double(next_raw() >> 11) * 0x1.0p-53; }

  // Uniform over {0,...,n-1}, zero modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    for (;;) {
      auto r = bounded_map<std::uint64_t, unsigned __int128>(next_raw(), n);
      if (r.accepted) return r.index;
    }
  }

  // Independent source derived from this source's seed (not its current
  // position): fork_stream(s, k) is a pure function of (seed, algorithm, k).
  UniformSource fork_stream(std::uint64_t stream_id) const {
    return UniformSource(seed_, algorithm_, stream_id);
  }

  std::uint64_t seed() const { return seed_; }
  RngAlgorithm algorithm() const { return algorithm_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  void long_jump() {
    static constexpr std::array<std::uint64_t, 4> kJump = {
        0x76e15d3efefdcbbfull, 0xc5004e441c522fb3ull, 0x77710069854ee241ull,
        0x39109bb02acbe635ull};
    std::array<std::uint64_t, 4> acc = {0, 0, 0, 0};
    for (std::uint64_t word : kJump) {
      for (int b = 0; b < 64; ++b) {
        if (word & (1ull << b)) {
          for (int i = 0; i < 4; ++i) acc[i] ^= state_[i];
        }
        next_raw();
      }
    }
    state_ = acc;
  }

  std::uint64_t seed_;
  RngAlgorithm algorithm_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> state_ = {0, 0, 0, 0};
};

inline RngAlgorithm rng_algorithm_from_name(std::string_view name) {
  if (name == "xoshiro256ss") return RngAlgorithm::xoshiro256ss;
  if (name == "splitmix64") return RngAlgorithm::splitmix64;
  throw ParameterError("unknown rng algorithm: " + std::string(name));
}

}  // namespace tilegen
