#pragma once

#include <cstdint>
#include <random>

namespace seqvqe {

// SplitMix64 finalizer. Used to derive independent RNG streams from a master
// seed plus structural indices (worker, restart, block, ...), so results do
// not depend on scheduling order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b), c);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           std::uint64_t d) {
  return mix64(mix64(a, b, c), d);
}

// Uniform double in [0, 1) built from the top 53 bits, identical on every
// platform for a given engine state.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform angle in (-pi, pi].
inline double uniform_angle(std::mt19937_64& rng) {
  return 3.14159265358979323846 * (1.0 - 2.0 * uniform01(rng));
}

}  // namespace seqvqe
