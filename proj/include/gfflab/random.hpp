#pragma once

#include <cstdint>
#include <random>

namespace gfflab {

using Rng = std::mt19937_64;

// Stream seeds depend only on (master, stream index, salt), never on scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(salt + 0x51ed270b27a3f1c5ULL)) + index);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index = 0, std::uint64_t salt = 0) {
  std::uint64_t s = derive_seed(master, index, salt);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(salt)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1), never 0.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Deterministic uniform mark from a key, used for coupled thinning.
inline double hashed_uniform(std::uint64_t seed, std::uint64_t key) {
  return (static_cast<double>(splitmix64(derive_seed(seed, key, 0x7a11)) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace gfflab
