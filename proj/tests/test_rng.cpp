#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "fpso/rng.hpp"

using namespace fpso;

// Expected values computed with an independent Python implementation of
// splitmix64 and xoshiro256++; the seed-0 splitmix64 values also match the
// reference implementation's published test vector.

TEST_CASE("splitmix64 reference outputs") {
  std::uint64_t s0 = 0;
  CHECK(splitmix64(s0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(s0) == 0x6e789e6aa1b965f4ULL);
  CHECK(splitmix64(s0) == 0x06c45d188009454fULL);

  std::uint64_t s42 = 42;
  CHECK(splitmix64(s42) == 0xbdd732262feb6e95ULL);
  CHECK(splitmix64(s42) == 0x28efe333b266f103ULL);
  CHECK(splitmix64(s42) == 0x47526757130f9f52ULL);
}

TEST_CASE("xoshiro256++ raw outputs for seed 42") {
  Rng rng(42);
  CHECK(rng.next_u64() == 0xd0764d4f4476689fULL);
  CHECK(rng.next_u64() == 0x519e4174576f3791ULL);
  CHECK(rng.next_u64() == 0xfbe07cfb0c24ed8cULL);
  CHECK(rng.next_u64() == 0xb37d9f600cd835b8ULL);
}

TEST_CASE("xoshiro256++ raw outputs for seed 7") {
  Rng rng(7);
  CHECK(rng.next_u64() == 0x0e2c1a002aae913dULL);
  CHECK(rng.next_u64() == 0x2c0fc8ddfa4e9e14ULL);
}

TEST_CASE("uniform01 takes the top 53 bits") {
  Rng rng(42);
  CHECK(rng.uniform01() == 0.8143051451229099);
  CHECK(rng.uniform01() == 0.3188210400616611);
  CHECK(rng.uniform01() == 0.9838941681774888);
}

TEST_CASE("uniform01 range and granularity") {
  Rng rng(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    // Exactly 53 random bits: scaling by 2^53 must give an integer.
    const double scaled = u * 9007199254740992.0;
    CHECK(scaled == std::floor(scaled));
  }
}

TEST_CASE("draw counter") {
  Rng rng(1);
  CHECK(rng.draws() == 0);
  rng.uniform01();
  rng.uniform01();
  CHECK(rng.draws() == 2);
  rng.next_u64();  // raw output is not a uniform01 draw
  CHECK(rng.draws() == 2);
}

TEST_CASE("determinism") {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a == b);
}

TEST_CASE("jump reference outputs") {
  Rng one_jump(42);
  one_jump.jump();
  CHECK(one_jump.next_u64() == 0xc0b6f4be293b1ae5ULL);

  Rng two_jumps(42);
  two_jumps.jump();
  two_jumps.jump();
  CHECK(two_jumps.next_u64() == 0xbd1a801454ff844bULL);
}

TEST_CASE("substreams") {
  CHECK(Rng::substream(42, 0) == Rng(42));

  Rng manual(42);
  manual.jump();
  CHECK(Rng::substream(42, 1) == manual);
  manual.jump();
  manual.jump();
  CHECK(Rng::substream(42, 3) == manual);

  // Distinct substreams produce distinct output.
  Rng s0 = Rng::substream(5, 0);
  Rng s1 = Rng::substream(5, 1);
  CHECK(s0.next_u64() != s1.next_u64());
}
