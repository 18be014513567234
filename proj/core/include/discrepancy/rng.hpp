#pragma once

#include <cstdint>
#include <random>

namespace discrepancy {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr Seed derive_seed(Seed parent, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(parent) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

constexpr Seed derive_seed(Seed parent, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(parent, a), b);
}

inline Rng make_rng(Seed seed) {
  return Rng(mix_seed(seed));
}

}  // namespace discrepancy
