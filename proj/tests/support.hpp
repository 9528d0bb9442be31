#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "bpi/geometry.hpp"

namespace bpi::testing {

/// Random closed boxes with ids 1..n on a small grid so that shared
/// coordinates and degenerate extents are common.
inline std::vector<Box> random_boxes(std::mt19937_64& rng, std::size_t n, int d, Scalar range, Scalar max_extent) {
  std::uniform_int_distribution<Scalar> pos(0, range);
  std::uniform_int_distribution<Scalar> ext(0, max_extent);
  std::vector<Box> out;
  for (std::size_t i = 0; i < n; ++i) {
    Box b;
    b.id = static_cast<std::uint32_t>(i + 1);
    b.dim = d;
    for (int t = 0; t < d; ++t) {
      b.lo[t] = pos(rng);
      b.hi[t] = b.lo[t] + ext(rng);
    }
    out.push_back(b);
  }
  return out;
}

inline Box random_query(std::mt19937_64& rng, int d, Scalar range, Scalar max_extent) {
  return random_boxes(rng, 1, d, range, max_extent).front();
}

inline std::vector<std::uint32_t> sorted(std::vector<std::uint32_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace bpi::testing
