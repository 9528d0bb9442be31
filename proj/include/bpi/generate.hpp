#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bpi/geometry.hpp"

namespace bpi {

enum class Distribution : std::uint8_t { Uniform, Nested, Slabs, Clustered, DegenerateHeavy };

inline constexpr Distribution kAllDistributions[] = {Distribution::Uniform, Distribution::Nested, Distribution::Slabs,
                                                     Distribution::Clustered, Distribution::DegenerateHeavy};

const char* distribution_name(Distribution d);
/// Throws UsageError on an unknown name.
Distribution parse_distribution(std::string_view name);

struct GenParams {
  std::uint64_t seed = 1;
  std::size_t n = 0;
  int d = 2;
  Distribution dist = Distribution::Uniform;
  Scalar range = 100;      // coordinates in [0, range]
  Scalar max_extent = 0;   // uniform only; 0 means range / 4
};

/// Boxes with ids 1..n. The output depends only on the parameters: draws
/// go through a fixed 64-bit generator with explicit reduction, so the
/// result does not vary with the standard library.
std::vector<Box> generate_boxes(const GenParams& p);

/// `count` query boxes over the same coordinate range, ids 1..count.
std::vector<Box> generate_queries(std::uint64_t seed, std::size_t count, int d, Scalar range);

/// Number of boxes with zero extent on at least one axis.
std::size_t count_degenerate(const std::vector<Box>& boxes);

}  // namespace bpi
