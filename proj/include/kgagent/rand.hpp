#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace kgagent {

// std::uniform_int_distribution and friends are implementation-defined, so seeded
// runs would not reproduce across standard libraries. These draws are pinned.

// Unbiased integer in [0, n) via rejection sampling. n must be > 0.
inline std::uint64_t draw_below(std::mt19937& rng, std::uint64_t n) {
  const std::uint64_t span = 1ull << 32;
  const std::uint64_t limit = span - span % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform in [0, 1) with 32 bits of resolution.
inline double draw_unit(std::mt19937& rng) {
  return rng() * (1.0 / 4294967296.0);
}

// Uniform in [lo, hi).
inline double draw_range(std::mt19937& rng, double lo, double hi) {
  return lo + (hi - lo) * draw_unit(rng);
}

// Fisher-Yates, back to front.
template <class T>
void shuffle_in_place(std::vector<T>& items, std::mt19937& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[draw_below(rng, i)]);
  }
}

}  // namespace kgagent
