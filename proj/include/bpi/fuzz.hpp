#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bpi/generate.hpp"
#include "bpi/geometry.hpp"

namespace bpi {

/// A failing (instance, query) pair with a short description.
struct Mismatch {
  int d = 2;
  double delta = 0.5;
  std::vector<Box> boxes;
  Box query;
  std::string reason;
};

/// Builds the structure on `boxes`, runs q and compares against the brute
/// force pair list. Returns a description of the first discrepancy
/// (missing, extra or duplicate pair, or an exception), nullopt if equal.
std::optional<std::string> differential_check(const std::vector<Box>& boxes, int d, double delta, const Box& q);

using FailureCheck = std::function<std::optional<std::string>(const std::vector<Box>&)>;

/// Greedily drops boxes while `still_fails` keeps reporting a failure, then
/// renumbers ids to 1..n if that still fails. The result always fails.
Mismatch minimize(Mismatch m, const FailureCheck& still_fails);
/// Same, with the differential check on m's query as the failure.
Mismatch minimize(Mismatch m);

struct FuzzConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t n_max = 200;
  int d = 2;
  std::optional<Distribution> dist;  // rotate through all when unset
  std::optional<double> delta;       // rotate through {1/d, 1/2, 3/4} when unset
  Scalar range = 32;
  std::size_t queries = 10;
};

struct FuzzReport {
  std::size_t instances = 0;
  std::size_t queries = 0;
  std::optional<Mismatch> first;  // already minimized
};

/// Stops at the first mismatch.
FuzzReport run_fuzz(const FuzzConfig& cfg);

/// δ used for trial `trial` when the configuration does not fix one.
double fuzz_delta(int d, std::size_t trial);

}  // namespace bpi
