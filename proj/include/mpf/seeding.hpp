#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mpf {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of a string.
constexpr std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stream seed for one (master, episode, step, label) tuple. Platform
/// independent, unlike std::hash.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view episode_id, std::int64_t t,
                                    std::string_view label) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ hash_string(episode_id));
  h = mix64(h ^ static_cast<std::uint64_t>(t));
  h = mix64(h ^ hash_string(label));
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace mpf
