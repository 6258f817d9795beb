#pragma once

// Deterministic randomness. Every stream in the library descends from one
// master seed through named children, so a run is reproducible from the seed
// alone and independent of std library implementation details (std::hash and
// std::*_distribution are not pinned by the standard and are never used).

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace agora {

using Rng = std::mt19937_64;

// splitmix64 finalizer. Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// FNV-1a over the bytes of a string. Stable across platforms.
constexpr std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// A node in the seed tree. child() derivations commute with nothing: the
// path (root, names..., indices...) fully determines the stream.
struct RngStream {
  std::uint64_t state = 0;

  static RngStream root(std::uint64_t master_seed) {
    return {mix64(master_seed ^ 0xA5A5A5A55A5A5A5AULL)};
  }
  RngStream child(std::string_view name) const {
    return {mix64(state ^ hash_name(name))};
  }
  RngStream child(std::uint64_t index) const {
    return {mix64(state ^ mix64(index ^ 0x0DDC0FFEEBADF00DULL))};
  }
  Rng engine() const { return Rng(state); }
};

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n). Rejection on the top partial block.
inline std::uint64_t uniform_below(Rng& g, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = g();
  while (v >= limit) v = g();
  return v % n;
}

inline bool bernoulli(Rng& g, double p) { return uniform01(g) < p; }

// Standard normal via Box-Muller. Two uniforms per draw, no cached spare,
// so the draw count per call is fixed.
inline double normal01(Rng& g) {
  const double u1 = 1.0 - uniform01(g);  // (0, 1]
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Fisher-Yates permutation of {0, ..., n-1}.
inline std::vector<std::size_t> permutation(std::size_t n, Rng& g) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(g, i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace agora
