#include <doctest.h>

#include <cstdint>
#include <vector>

#include "zo/rng.hpp"

using zo::RngStream;

namespace {

// Reference SplitMix64 (Vigna), transcribed independently of the library.
std::uint64_t splitmix_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

TEST_SUITE("rng") {

TEST_CASE("stream is the splitmix64 sequence") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xDEADBEEFULL}) {
    RngStream rng(seed);
    std::uint64_t state = seed;
    for (int k = 0; k < 100; ++k) CHECK(rng.next_u64() == splitmix_next(state));
    CHECK(rng.counter() == 100);
  }
}

TEST_CASE("known first outputs for seed 0") {
  // Published SplitMix64 test vector.
  RngStream rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("same seed, same draws; copies continue identically") {
  RngStream a(7), b(7);
  for (int k = 0; k < 10; ++k) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
  }
  RngStream c = a;
  CHECK(c == a);
  CHECK(c.next_u64() == a.next_u64());
}

TEST_CASE("uniform stays in [0, 1)") {
  RngStream rng(3);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("below is in range and roughly flat") {
  RngStream rng(11);
  std::vector<int> counts(5, 0);
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const auto i = rng.below(5);
    REQUIRE(i < 5);
    ++counts[i];
  }
  for (int c : counts) CHECK(c == doctest::Approx(n / 5).epsilon(0.03));
  CHECK(rng.below(1) == 0);
}

TEST_CASE("normal has zero mean and unit variance") {
  RngStream rng(5);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("derived seeds differ from each other and from the base") {
  std::vector<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 64; ++i) seen.push_back(zo::derive_seed(1, i));
  for (std::size_t i = 0; i < seen.size(); ++i) {
    CHECK(seen[i] != 1);
    for (std::size_t j = i + 1; j < seen.size(); ++j) CHECK(seen[i] != seen[j]);
  }
  CHECK(zo::derive_seed(1, 0) != zo::derive_seed(2, 0));
  CHECK(zo::derive_seed(9, 4) == zo::derive_seed(9, 4));
}

}
