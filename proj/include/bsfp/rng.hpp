#pragma once

#include <cstdint>
#include <random>

namespace bsfp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Key of the search-tree root for a given user seed.
constexpr std::uint64_t root_key(std::uint64_t seed) { return mix64(seed); }

/// Key of the child in `slot` of the node keyed `parent`. Keys depend only on
/// the creation path, so a node expands identically whatever else is in the tree.
constexpr std::uint64_t child_key(std::uint64_t parent, std::size_t slot) {
  return mix64(parent ^ mix64(0xC2B2AE3D27D4EB4FULL + slot));
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n); n > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n)) % n;
}

}  // namespace bsfp
