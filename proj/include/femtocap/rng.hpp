// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace femtocap {

using Rng = std::mt19937_64;

/// Independent substreams of one drop. Each purpose draws from its own engine so
/// that changing how much one consumer draws never shifts another.
enum class Stream : std::uint32_t {
  Positions = 1,
  Shadowing = 2,
  Fading = 3,
  Validation = 4,
};

inline Rng make_rng(std::uint64_t seed, std::uint64_t index, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

}  // namespace femtocap
