#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kt1 {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for (seed, keys...). Same inputs, same stream.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return Rng{h};
}

namespace stream {
inline constexpr std::uint64_t kGraph = 1;
inline constexpr std::uint64_t kIds = 2;
inline constexpr std::uint64_t kWeights = 3;
inline constexpr std::uint64_t kStars = 4;
inline constexpr std::uint64_t kDelay = 5;
inline constexpr std::uint64_t kNode = 6;
}  // namespace stream

}  // namespace kt1
