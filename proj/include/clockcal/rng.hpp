#pragma once

#include <cmath>
#include <cstdint>

namespace clockcal::rng {

// Sub-stream salts. Every randomness consumer owns a stream, so enabling or
// disabling one consumer never shifts the samples seen by another.
enum class Stream : std::uint64_t {
  NoiseRf = 0x9d4c9f2b0aa7e001ULL,
  NoiseChip = 0x9d4c9f2b0aa7e002ULL,
  Loss = 0x9d4c9f2b0aa7e003ULL,
  Jitter = 0x9d4c9f2b0aa7e004ULL,
  Instance = 0x9d4c9f2b0aa7e005ULL,
};

// SplitMix64 output function over (seed, stream, counter). Counter-based, so
// sample i is addressable in O(1) from any thread.
inline std::uint64_t mix(std::uint64_t seed, Stream stream, std::uint64_t counter) {
  std::uint64_t z = seed ^ static_cast<std::uint64_t>(stream);
  z += 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0, 1).
inline double uniform01(std::uint64_t seed, Stream stream, std::uint64_t counter) {
  return static_cast<double>(mix(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes counters 2c and 2c+1.
inline double normal(std::uint64_t seed, Stream stream, std::uint64_t counter) {
  const double u1 = 1.0 - uniform01(seed, stream, 2 * counter);  // (0, 1]
  const double u2 = uniform01(seed, stream, 2 * counter + 1);
  constexpr double two_pi = 6.283185307179586;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace clockcal::rng
