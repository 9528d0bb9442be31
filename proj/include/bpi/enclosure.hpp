#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "bpi/counters.hpp"
#include "bpi/geometry.hpp"
#include "bpi/persistent_list.hpp"
#include "bpi/segment_tree.hpp"

namespace bpi {

/// Point enclosure over closed boxes in any dimension. The first axis is a
/// segment tree over elementary pieces; each node stores its boxes in an
/// enclosure structure for the remaining axes. The last axis is a
/// PersistentActiveList swept along that axis, so a stabbing query at a
/// node is a version lookup followed by an O(1)-per-item walk.
///
/// Reports payloads, which are the caller's box indices.
class EnclosureIndex {
 public:
  EnclosureIndex() = default;
  EnclosureIndex(std::span<const Box> boxes, std::span<const std::uint32_t> payloads, int first_axis = 0);
  EnclosureIndex(EnclosureIndex&&) noexcept = default;
  EnclosureIndex& operator=(EnclosureIndex&&) noexcept = default;

  void report(std::span<const Scalar> p, QueryCounters& ctr, const std::function<void(std::uint32_t)>& fn) const;
  bool any(std::span<const Scalar> p, QueryCounters& ctr) const;

  /// Nonempty last-axis cursors whose walks together enumerate every box
  /// containing p (planar case only: two axes).
  std::vector<PersistentActiveList::Cursor> entries(std::span<const Scalar> p) const;

  std::size_t stored_cells() const;

 private:
  int axis_ = 0;
  int last_axis_ = 0;
  // last axis
  PersistentActiveList list_;
  // other axes
  PieceLine line_;
  SlabTree tree_;
  std::vector<std::unique_ptr<EnclosureIndex>> children_;  // per tree node, may be null
  std::size_t placements_ = 0;
};

}  // namespace bpi
