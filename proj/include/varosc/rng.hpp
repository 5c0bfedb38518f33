#ifndef VAROSC_RNG_HPP_
#define VAROSC_RNG_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

namespace varosc {

// SplitMix64 (Steele/Lea/Flood mixing constants).  Chosen over the standard
// <random> engines so the exact integer stream is pinned by this header and
// can be reproduced from any language with 64-bit arithmetic.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

// One splitmix scramble of (seed XOR index); used to derive independent
// per-trial streams from a single experiment seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed ^ index).next();
}

// Box-Muller pair of independent standard normals.  u1 is mapped into (0, 1]
// so the logarithm is always finite.
inline std::pair<double, double> gaussian_pair(SplitMix64& rng) {
  const double u1 = 1.0 - rng.next_unit();
  const double u2 = rng.next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

// Complex Gaussian with independent N(0,1) real and imaginary parts.
inline std::complex<double> complex_gaussian(SplitMix64& rng) {
  auto [x, y] = gaussian_pair(rng);
  return {x, y};
}

}  // namespace varosc

#endif  // VAROSC_RNG_HPP_
