#pragma once

#include <cstdint>
#include <random>

namespace hypercube {

using Rng = std::mt19937_64;

/// Generator for one run. Run r of a batch with base seed s uses seed s + r.
inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

}  // namespace hypercube
