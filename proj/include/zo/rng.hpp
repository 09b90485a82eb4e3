#pragma once

#include <cstdint>
#include <optional>

namespace zo {

/// Counter-based random stream.
///
/// Draw k (k = 1, 2, ...) is `mix64(seed + k * 0x9E3779B97F4A7C15)`, where
/// `mix64` is the SplitMix64 finalizer. This is exactly the SplitMix64
/// sequence started from `seed`, so a (seed, counter) pair pins every
/// subsequent draw on any platform. Doubles use the top 53 bits; normals use
/// the Box-Muller transform and cache the second variate of each pair.
///
/// A stream belongs to one thread. Use `derive_seed` to fan out independent
/// streams for parallel work.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1).
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n - 1}; n must be positive. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Fair coin as +1 / -1.
  double sign() noexcept { return (next_u64() >> 63) != 0 ? 1.0 : -1.0; }
  /// Standard normal.
  double normal() noexcept;

  bool operator==(const RngStream&) const = default;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

/// Seed of the `index`-th child stream of `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace zo
