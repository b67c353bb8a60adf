#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "npag/core/types.hpp"

namespace npag {

using Rng = std::mt19937_64;

// Purpose of a random draw inside one iteration. Part of the substream key so the
// mapping batch and the Jacobian batch at one level are independent.
enum class DrawRole : std::uint64_t {
  kMapping = 1,
  kJacobian = 2,
  kOutput = 3,
  kData = 4,
  kAux = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic key for the substream (seed, stage, iteration, level, role).
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stage, std::uint64_t iteration,
                                   std::uint64_t level, DrawRole role) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stage);
  h = splitmix64(h ^ iteration);
  h = splitmix64(h ^ level);
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  return h;
}

inline Rng substream(std::uint64_t seed, std::uint64_t stage, std::uint64_t iteration,
                     std::uint64_t level, DrawRole role) {
  return Rng(substream_key(seed, stage, iteration, level, role));
}

enum class Replacement { kWith, kWithout };

// Index batch over a population of size n. A request for n or more indices without
// replacement returns the full ordered set {0, ..., n-1}.
inline std::vector<Index> draw_batch(Index n, Index size, Replacement mode, Rng& rng) {
  require(n >= 1, "draw_batch: empty population");
  require(size >= 1, "draw_batch: batch size must be >= 1");
  std::vector<Index> out;
  if (mode == Replacement::kWithout) {
    require(size <= n, "draw_batch: batch larger than population without replacement");
    out.resize(size);
    if (size == n) {
      std::iota(out.begin(), out.end(), Index{0});
      return out;
    }
    std::vector<Index> population(n);
    std::iota(population.begin(), population.end(), Index{0});
    out.clear();
    out.reserve(size);
    std::sample(population.begin(), population.end(), std::back_inserter(out), size, rng);
    return out;
  }
  out.reserve(size);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  for (Index k = 0; k < size; ++k) out.push_back(pick(rng));
  return out;
}

inline std::vector<Index> full_batch(Index n) {
  std::vector<Index> out(n);
  std::iota(out.begin(), out.end(), Index{0});
  return out;
}

inline bool is_full_ordered(std::span<const Index> batch, Index n) {
  if (batch.size() != n) return false;
  for (Index k = 0; k < n; ++k) {
    if (batch[k] != k) return false;
  }
  return true;
}

}  // namespace npag
