#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace xtrapulp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective 64-bit mix used for hashing and seeding.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream identifiers for seed derivation. Every random decision in the
/// library draws from an engine seeded by derive_seed(run seed, stream, index).
enum class Stream : std::uint64_t {
  Roots = 1,
  InitTask = 2,
  Generator = 3,
  Baseline = 4,
  Diameter = 5,
  Distribution = 6,
};

std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  return Rng(derive_seed(seed, stream, index));
}

/// Uniform integer in [0, bound). Rejection sampling, so the result depends
/// only on the engine output and not on the standard library implementation.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace xtrapulp
