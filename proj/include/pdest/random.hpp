#pragma once

#include <array>
#include <cstdint>

namespace pdest {

/// xoshiro256** seeded through splitmix64. All sampling helpers below are
/// written out explicitly so a seed yields the same stream on every platform
/// (the std:: distributions are implementation-defined).
class Rng
{
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

  /// Poisson by sequential inversion, split into chunks of mean <= 500.
  std::uint64_t poisson(double mean);

  /// Independent stream for replicate `index` derived from `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace pdest
