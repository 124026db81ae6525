#pragma once

#include <cstdint>
#include <random>

namespace sfcgame {

/// The engine's output sequence is fixed by the C++ standard, so seeded
/// draws are identical across standard libraries.
using Rng = std::mt19937_64;

/// Uniform on [0, 1) from the top 53 bits. Used instead of
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace sfcgame
