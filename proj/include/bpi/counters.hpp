#pragma once

#include <cstdint>

namespace bpi {

/// Instrumented work counters for one query. Query paths take a reference
/// and only ever add to it.
struct QueryCounters {
  std::uint64_t nodes_visited = 0;  // tree / search-structure nodes touched
  std::uint64_t list_steps = 0;     // linked-list and sorted-array steps
  std::uint64_t candidates = 0;     // candidate pairs passed through a verifier
  std::uint64_t reported = 0;       // pairs emitted

  std::uint64_t work() const { return nodes_visited + list_steps + candidates; }

  QueryCounters& operator+=(const QueryCounters& o) {
    nodes_visited += o.nodes_visited;
    list_steps += o.list_steps;
    candidates += o.candidates;
    reported += o.reported;
    return *this;
  }
};

}  // namespace bpi
