#pragma once

#include <cstdint>
#include <random>

#include "portfind/fixed.hpp"

namespace portfind {

// mt19937_64 is fully pinned by the standard, so seeded streams are
// identical everywhere. std::uniform_*_distribution is not; the helpers
// below replace it.
using DetRng = std::mt19937_64;

// Unbiased draw from [0, n) by rejection sampling. n must be > 0.
inline uint64_t uniform_index(DetRng& rng, uint64_t n) {
  const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

// Uniform fixed-point fraction strictly inside (0, 1).
inline Fixed uniform_fraction(DetRng& rng) {
  return Fixed::from_raw(1 + static_cast<int64_t>(uniform_index(rng, Fixed::kScale - 1)));
}

}  // namespace portfind
