#pragma once

#include <array>
#include <cstdint>

namespace spdt {

// Stream phase tags. Each subsystem draws from its own family of streams so
// that, e.g., node 7 of the generator and run 7 of the simulator never share
// a sequence.
namespace stream_phase {
inline constexpr std::uint64_t generator = 1;
inline constexpr std::uint64_t sir_run = 2;
inline constexpr std::uint64_t badn = 3;
inline constexpr std::uint64_t densify = 4;
inline constexpr std::uint64_t sampler = 5;
}  // namespace stream_phase

constexpr std::uint64_t make_stream(std::uint64_t phase, std::uint64_t index) {
  return (phase << 56) ^ index;
}

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ seeded from (seed, stream) through a splitmix64 chain.
// The same (seed, stream) pair always yields the same sequence, so work can
// be sharded across any number of workers without changing results: every
// logical owner (node, run, host) gets its own stream.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t chain = seed;
    chain ^= 0xD6E8FEB86659FD93ULL * (stream + 1);
    for (auto& word : state_) word = splitmix64_next(chain);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace spdt
