#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bpi/counters.hpp"
#include "bpi/geometry.hpp"
#include "bpi/highdim.hpp"

namespace bpi {

/// A box set as read from disk. Build files carry the δ they were built
/// with; plain instance files do not.
struct Instance {
  int d = 2;
  std::vector<Box> boxes;
  std::optional<double> delta;
};

// All formats are line-delimited JSON with integer coordinates. Malformed
// input (bad header, floats, wrong arity, lo > hi, ids not 1..n) raises
// UsageError with the offending line number.

/// Header {"d","n"} followed by one {"id","lo","hi"} record per box.
void write_instance(std::ostream& os, int d, std::span<const Box> boxes);
Instance read_instance(std::istream& is);

/// Like an instance file, with "delta" and "stats" added to the header.
void write_build(std::ostream& os, int d, double delta, const BpiStats& stats, std::span<const Box> boxes);

/// Header {"d","n"} followed by {"qid","lo","hi"} records; the returned
/// boxes carry the qid as their id.
void write_queries(std::ostream& os, int d, std::span<const Box> queries);
std::vector<Box> read_queries(std::istream& is);

/// One {"qid","pairs","tags","counters"} line. Pairs are sorted and tags
/// follow the same order.
void write_result(std::ostream& os, std::uint32_t qid, std::vector<PairReport> pairs, const QueryCounters& ctr);

/// Single-line JSON rendering of build statistics.
std::string stats_json(const BpiStats& s);

}  // namespace bpi
