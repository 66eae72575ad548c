#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace crafterlab {

// 64-bit MMIX LCG. Single-word state keeps WorldState cheap to copy, hash and
// serialize; only the high bits are consumed.
using Engine = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                               1442695040888963407ULL, 0ULL>;

// Platform-independent draws (std distributions are implementation-defined).
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint32_t uniform_index(Engine& rng, std::uint32_t n) {
  const std::uint64_t hi = rng() >> 32;
  return static_cast<std::uint32_t>((hi * n) >> 32);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

// Seed of the world generated for episode `index` of a run started from `base`.
inline std::uint64_t episode_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x5851f42d4c957f2dULL));
}

inline std::string engine_state(const Engine& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

inline Engine engine_from_state(const std::string& text) {
  Engine rng;
  std::istringstream is(text);
  is >> rng;
  return rng;
}

}  // namespace crafterlab
