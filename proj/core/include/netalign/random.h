#ifndef NETALIGN_RANDOM_H_
#define NETALIGN_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace netalign {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent streams from a base seed.
inline std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the stream identified by (seed, k0, k1, ...). Streams derived from
// different key tuples are statistically independent.
inline std::uint64_t DeriveSeed(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = MixSeed(seed);
  for (std::uint64_t k : keys) h = MixSeed(h ^ MixSeed(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng MakeRng(std::uint64_t seed,
                   std::initializer_list<std::uint64_t> keys = {}) {
  return Rng(DeriveSeed(seed, keys));
}

}  // namespace netalign

#endif  // NETALIGN_RANDOM_H_
