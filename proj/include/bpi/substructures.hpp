#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bpi/counters.hpp"
#include "bpi/enclosure.hpp"
#include "bpi/geometry.hpp"
#include "bpi/persistent_list.hpp"
#include "bpi/priority_search_tree.hpp"
#include "bpi/range_tree.hpp"

namespace bpi {

/// Point enclosure over the input rectangles (PtEnc). Reports input indices.
class StabbingStructure {
 public:
  StabbingStructure() = default;
  explicit StabbingStructure(std::span<const Box> rects);

  std::vector<std::uint32_t> report(std::array<Scalar, 2> p, QueryCounters& ctr) const;
  bool any(std::array<Scalar, 2> p, QueryCounters& ctr) const;
  const EnclosureIndex& index() const { return index_; }
  std::size_t stored_cells() const { return index_.stored_cells(); }

 private:
  EnclosureIndex index_;
};

/// Precomputed nonempty entry cursors into the stabbing structure for a fixed
/// set of points (EPtEnc). Enumeration touches only nonempty lists.
class EndpointEntryTable {
 public:
  EndpointEntryTable() = default;
  EndpointEntryTable(const StabbingStructure& ptenc, std::span<const std::array<Scalar, 2>> points);

  std::size_t point_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::vector<std::uint32_t> enumerate(std::uint32_t point_id, QueryCounters& ctr) const;
  std::size_t entry_count() const { return cursors_.size(); }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<PersistentActiveList::Cursor> cursors_;
};

/// Axis-parallel segments "fixed × [lo, hi]" answering the crossing query
/// fixed in [a, b], lo <= c, hi >= d. Range tree on `fixed` with a priority
/// search tree per node: O(log^2 n + K).
class SegmentCrossIndex {
 public:
  struct Segment {
    Scalar fixed, lo, hi;
    std::uint32_t payload;
  };

  SegmentCrossIndex() = default;
  explicit SegmentCrossIndex(std::vector<Segment> segments);

  template <typename Fn>
  void report(Scalar a, Scalar b, Scalar c, Scalar d, QueryCounters& ctr, Fn&& fn) const {
    std::vector<std::int32_t> canon;
    canonical(a, b, canon, ctr);
    for (auto v : canon) nodes_[v].pst.report(kNegInf, c, d, ctr, fn);
  }
  bool any(Scalar a, Scalar b, Scalar c, Scalar d, QueryCounters& ctr) const;
  std::size_t size() const { return count_; }
  std::size_t stored_cells() const;

 private:
  struct Node {
    Scalar fixed_min, fixed_max;
    std::int32_t left = -1, right = -1;
    PrioritySearchTree pst;
  };
  std::int32_t build(std::vector<Segment>& segs, std::int32_t b, std::int32_t e);
  void canonical(Scalar a, Scalar b, std::vector<std::int32_t>& out, QueryCounters& ctr) const;

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  std::size_t count_ = 0;
};

/// Stretches crossing a query rectangle, one index per orientation (RecCross).
/// Reports stretch indices.
class CrossingStructure {
 public:
  CrossingStructure() = default;
  explicit CrossingStructure(std::span<const Stretch> stretches);

  std::vector<std::uint32_t> report(const Box& q, bool vertical, QueryCounters& ctr) const;
  bool any(const Box& q, bool vertical, QueryCounters& ctr) const;
  std::size_t stored_cells() const { return vertical_.stored_cells() + horizontal_.stored_cells(); }

 private:
  SegmentCrossIndex vertical_;
  SegmentCrossIndex horizontal_;
};

/// Stretch endpoints inside a closed query rectangle (RecEnc). Endpoint id is
/// 2 * stretch + which.
class EndpointRangeStructure {
 public:
  EndpointRangeStructure() = default;
  explicit EndpointRangeStructure(std::span<const Stretch> stretches);

  std::vector<std::uint32_t> report(const Box& q, QueryCounters& ctr) const;
  std::size_t stored_cells() const { return tree_.stored_cells(); }

 private:
  RangeTree tree_;
};

/// Ordered walks along stretches (SegInt). For each stretch endpoint the
/// entry cursor into a persistent list of orthogonal rectangle sides is
/// precomputed, so a walk costs O(1) per reported side.
class SideWalker {
 public:
  SideWalker() = default;
  SideWalker(std::span<const Box> rects, std::span<const Stretch> stretches);

  /// Walks from endpoint `which` of `stretch` (which must lie in q) toward
  /// the other endpoint, reporting the rectangle index of every orthogonal
  /// side crossed, until the far endpoint or the boundary of q.
  template <typename Fn>
  void walk(std::uint32_t stretch, int which, const Box& q, QueryCounters& ctr, Fn&& fn) const {
    const Stretch& s = stretches_[stretch];
    const int along = s.vertical() ? 1 : 0;
    if (!q.contains_point(s.endpoint(which))) throw UsageError("segint_walk: endpoint not in query");
    auto c = entries_[2 * stretch + which];
    ++ctr.nodes_visited;
    if (which == 0) {
      const Scalar limit = std::min(s.hi, q.hi[along]);
      for (; c && c.key() <= limit; c.advance()) {
        ++ctr.list_steps;
        fn(c.payload());
      }
    } else {
      const Scalar limit = std::max(s.lo, q.lo[along]);
      for (; c && c.key() >= limit; c.advance()) {
        ++ctr.list_steps;
        fn(c.payload());
      }
    }
  }

  std::size_t stored_cells() const;

 private:
  // [0]: horizontal sides ascending in y, [1]: descending; [2], [3]: vertical
  // sides ascending / descending in x.
  std::array<std::unique_ptr<PersistentActiveList>, 4> lists_;
  std::vector<Stretch> stretches_;
  std::vector<PersistentActiveList::Cursor> entries_;
};

/// Rectangles intersecting a query rectangle (RecInt). A rectangle meets q
/// iff one of its sides meets q or q lies inside it, so two side indices
/// plus a stabbing query at q's lower corner cover every case.
class RectIntersectIndex {
 public:
  RectIntersectIndex() = default;
  RectIntersectIndex(std::span<const Box> rects, const StabbingStructure* ptenc);

  std::vector<std::uint32_t> report(const Box& q, QueryCounters& ctr) const;
  std::size_t stored_cells() const;

 private:
  const StabbingStructure* ptenc_ = nullptr;
  SegmentCrossIndex vertical_sides_;
  SegmentCrossIndex horizontal_sides_;
};

}  // namespace bpi
