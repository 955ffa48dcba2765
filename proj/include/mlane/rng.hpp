#pragma once

#include <cstdint>
#include <random>

namespace mlane {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

// Independent stream keyed by (seed, node, walk) so parallel corpus sampling
// is order-independent: each (node, walk) pair draws only from its own engine.
inline std::mt19937_64 walk_rng(std::uint64_t seed, int node, int walk) {
  return std::mt19937_64(
      mix_keys(mix_keys(seed, static_cast<std::uint64_t>(node)),
               static_cast<std::uint64_t>(walk) + 0x51edULL));
}

inline double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Uniform integer in [0, n).
inline int uniform_index(std::mt19937_64& rng, int n) {
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

}  // namespace mlane
