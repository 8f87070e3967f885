#include "pdest/random.hpp"

#include "pdest/core.hpp"

#include <cmath>
#include <numbers>

namespace pdest {

namespace {

std::uint64_t rotl(std::uint64_t x, int k)
{
  return (x << k) | (x >> (64 - k));
}

std::uint64_t poisson_small(Rng& rng, double mean)
{
  double p = std::exp(-mean);
  double cdf = p;
  const double u = rng.uniform();
  std::uint64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    const double next = cdf + p;
    if (next == cdf) // tail exhausted in double precision
      break;
    cdf = next;
  }
  return k;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t& state)
{
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed)
{
  std::uint64_t state = seed;
  for (auto& word : s_)
    word = splitmix64(state);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index)
{
  std::uint64_t state = seed ^ 0x5851f42d4c957f2dULL;
  state += index * 0x9e3779b97f4a7c15ULL;
  return Rng(splitmix64(state));
}

std::uint64_t Rng::next()
{
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform()
{
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0)
    u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::poisson(double mean)
{
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw Error("poisson: mean must be finite and non-negative");
  constexpr double chunk = 500.0;
  std::uint64_t total = 0;
  while (mean > chunk) {
    total += poisson_small(*this, chunk);
    mean -= chunk;
  }
  if (mean > 0.0)
    total += poisson_small(*this, mean);
  return total;
}

} // namespace pdest
