#pragma once

#include <cstdint>

#include "cwss/types.hpp"

namespace cwss {

// SplitMix64 finalizer. Used to derive independent child seeds from a
// (parent, stream) pair so that trials can be generated in any order.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr Seed derive_seed(Seed parent, std::uint64_t stream) {
  return mix64(mix64(parent) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// Named streams for the per-trial random draws.
enum class Stream : std::uint64_t { kSignal = 1, kNoise = 2, kPattern = 3 };

constexpr Seed derive_seed(Seed parent, Stream s) {
  return derive_seed(parent, static_cast<std::uint64_t>(s));
}

}  // namespace cwss
