#pragma once
#include <cstdint>

namespace mcme {

// Counter-based generator: a stateless 64-bit finalizer applied to
// (seed, stream, counter). Streams for different nodes are decorrelated and
// the draw for sample i of node j never depends on evaluation order, so
// sharded sampling is deterministic by construction.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0,1) from the top 53 bits.
inline double uniform01(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t h = mix64(mix64(mix64(seed) ^ stream) ^ counter);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace mcme
