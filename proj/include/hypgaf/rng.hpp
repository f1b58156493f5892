#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace hypgaf {

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the independent stream `index` derived from `master`. Streams
/// depend only on (master, index), so replicates can be split across
/// workers in any order.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Deterministic generator for one stream: 64-bit Mersenne Twister plus
/// hand-written transforms, so draws are identical across standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard complex Gaussian with E|xi|^2 = 1 (Box-Muller), so |xi|^2 is
  /// Exp(1) and the real and imaginary parts each have variance 1/2.
  std::complex<double> complex_gaussian() {
    const double radius = std::sqrt(-std::log(uniform_open()));
    const double angle = 2.0 * 3.14159265358979323846 * uniform_open();
    return std::polar(radius, angle);
  }

  /// Uniform angle in [0, 2 pi).
  double angle() { return 2.0 * 3.14159265358979323846 * (static_cast<double>(engine_() >> 11) * 0x1.0p-53); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hypgaf
