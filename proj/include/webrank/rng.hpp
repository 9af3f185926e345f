#pragma once

#include <cstdint>
#include <random>

namespace webrank {

// All randomness in the simulators goes through these helpers. std::mt19937_64
// produces the same stream on every platform, but std::uniform_*_distribution
// does not, so the draws are implemented directly on the raw engine output.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives the seed for an independent stream (per trial, per page).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base + 0x632be59bd9b4e019ULL * (stream + 1));
}

/// Uniform integer in [0, n) by rejection sampling; unbiased and portable.
inline std::uint32_t uniform_index(std::mt19937_64& gen, std::uint32_t n) {
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
  std::uint64_t v = gen();
  while (v >= limit) v = gen();
  return static_cast<std::uint32_t>(v % n);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace webrank
