#pragma once

// Deterministic uniform random number generation for the swarm engine.
//
// Generator identity: xoshiro256++ (Blackman & Vigna), state seeded by
// expanding one 64-bit seed through splitmix64.  Uniform doubles take the
// top 53 bits of the raw output, (x >> 11) * 2^-53, so streams are
// bit-identical across platforms and compilers.  Parallel replicates use
// non-overlapping substreams: substream k applies the generator's 2^128
// jump k times to the seeded state.

#include <array>
#include <cstdint>

namespace fpso {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  Rng() : Rng(0) {}

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
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

  // Uniform draw in [0, 1) with 53 random bits.
  double uniform01() {
    ++draws_;
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Advances the state by 2^128 steps without producing output.
  void jump() {
    static constexpr std::array<std::uint64_t, 4> kJump = {
        0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
        0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
      for (int bit = 0; bit < 64; ++bit) {
        if (word & (1ULL << bit)) {
          for (int i = 0; i < 4; ++i) acc[i] ^= state_[i];
        }
        next_u64();
      }
    }
    state_ = acc;
  }

  // Number of uniform01 draws consumed so far.
  std::uint64_t draws() const { return draws_; }

  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    Rng rng(seed);
    for (std::uint64_t k = 0; k < index; ++k) rng.jump();
    return rng;
  }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  std::uint64_t draws_ = 0;
};

}  // namespace fpso
