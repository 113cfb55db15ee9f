#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace polis {

using Rng = std::mt19937_64;

// Named sub-seed: every stage draws from hash(seed, name) so that one stage
// can be rerun on its own and still see the same stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::string_view name) {
  return Rng(derive_seed(seed, name));
}

}  // namespace polis
