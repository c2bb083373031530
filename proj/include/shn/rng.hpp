#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace shn {

/// Seed for an independent stream derived from a master seed and a path of
/// indices (experiment tag, trial, ...). Streams never depend on execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = master ^ 0x9e3779b97f4a7c15ull;
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  h = mix(h);
  for (std::uint64_t p : path) h = mix(h + 0x9e3779b97f4a7c15ull + p);
  return h;
}

inline double random_sign(std::mt19937_64& rng) { return (rng() >> 63) ? 1.0 : -1.0; }

inline double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace shn
