#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_set>
#include <vector>

#include "bpi/counters.hpp"
#include "bpi/geometry.hpp"
#include "bpi/persistent_list.hpp"
#include "bpi/segment_tree.hpp"
#include "bpi/substructures.hpp"

namespace bpi {

/// Stretches of all rectangle sides, grouped by owner in side order
/// (bottom, top, left, right). Each side is intersected with every other
/// rectangle found by `recint`.
std::vector<Stretch> compute_stretches(std::span<const Box> rects, const RectIntersectIndex& recint);

/// Segment-tree machinery for pairs whose intersection is crossed by q in
/// the "strict cross" way. Built over the x axis (`axis` = 0, walked along
/// the left side of q) or over the y axis (`axis` = 1, walked along the
/// bottom side of q). The y-built variant stores transposed copies so the
/// code below always speaks of x slabs and horizontal sides; ids and
/// indices are unchanged.
class C5Index {
 public:
  /// One horizontal side of a trimmed rectangle.
  struct TrimmedSide {
    std::int32_t node;
    std::uint32_t rect;
    bool top;
    Scalar lo, hi;  // y-extent of the trimmed rectangle
    std::int32_t top_start, bottom_start;
    PersistentActiveList::Cursor cover;  // crossSet members containing this side's y
  };
  struct NodeSets {
    std::vector<std::uint32_t> cross;  // S_I(v)
    std::vector<std::uint32_t> side;   // S_C(v)
  };

  C5Index() = default;
  C5Index(std::span<const Box> rects, int axis);

  /// Catalog sides crossing the walked side of q.
  std::vector<std::uint32_t> crossed_sides(const Box& q, QueryCounters& ctr) const;
  /// Distinct (node, owner) pairs behind the crossed sides.
  std::vector<std::pair<std::int32_t, std::uint32_t>> find_canonical_nodes(const Box& q, QueryCounters& ctr) const;
  /// crossSet members of the side's node whose y-range meets the side's
  /// trimmed y-range clipped to q; the owner itself is excluded.
  void enumerate_partners(std::uint32_t side, const Box& q, QueryCounters& ctr, std::vector<std::uint32_t>& out) const;

  /// Calls fn(i, j) for every candidate pair (input indices).
  template <typename Fn>
  void report(const Box& q, QueryCounters& ctr, Fn&& fn) const {
    if (tree_.size() == 0) return;
    std::unordered_set<std::uint64_t> done;
    std::vector<std::uint32_t> partners;
    for (auto s : crossed_sides(q, ctr)) {
      const TrimmedSide& ts = sides_[s];
      const auto key = (static_cast<std::uint64_t>(ts.node) << 32) | ts.rect;
      if (!done.insert(key).second) continue;
      partners.clear();
      enumerate_partners(s, q, ctr, partners);
      for (auto i : partners) fn(i, ts.rect);
    }
  }

  int axis() const { return axis_; }
  const PieceLine& line() const { return line_; }
  const SlabTree& tree() const { return tree_; }
  const NodeSets& sets(std::int32_t node) const { return sets_[node]; }
  std::span<const TrimmedSide> sides() const { return sides_; }
  /// Σ_v |S_I(v)| + |S_C(v)|.
  std::size_t membership_size() const { return membership_; }
  std::size_t stored_cells() const;

 private:
  struct NodeLists {
    std::vector<std::uint32_t> tops, bottoms;  // crossSet sorted by top / bottom
    std::vector<Scalar> top_keys, bottom_keys;
    PersistentActiveList cover;                // crossSet over y
  };
  Box local(const Box& b) const { return axis_ == 0 ? b : b.transposed(); }
  void build_node(std::int32_t v);
  void add_trimmed(std::int32_t v, std::uint32_t r, bool in_cross);

  int axis_ = 0;
  std::vector<Box> rects_;  // local coordinates
  std::vector<std::int32_t> piece_lo_, piece_hi_;
  PieceLine line_;
  SlabTree tree_;
  std::vector<NodeSets> sets_;
  std::vector<NodeLists> lists_;
  std::vector<TrimmedSide> sides_;
  std::vector<std::int32_t> side_piece_lo_, side_piece_hi_;
  std::unique_ptr<PersistentActiveList> catalog_;
  std::size_t membership_ = 0;
};

struct PlanarStats {
  std::size_t n = 0;
  std::size_t stretches = 0;
  std::size_t membership_x = 0, membership_y = 0;  // Σ_v |S_*(v)| per tree
  std::size_t catalog_x = 0, catalog_y = 0;        // trimmed sides per tree
  std::size_t stored_cells = 0;
};

/// The complete planar structure. Not copyable or movable: substructures
/// keep pointers into each other.
class PlanarStructure {
 public:
  explicit PlanarStructure(std::vector<Box> rects);
  PlanarStructure(const PlanarStructure&) = delete;
  PlanarStructure& operator=(const PlanarStructure&) = delete;

  std::vector<PairReport> report_c1(const Box& q, QueryCounters& ctr) const;
  std::vector<PairReport> report_c2(const Box& q, QueryCounters& ctr) const;
  std::vector<PairReport> report_c3(const Box& q, QueryCounters& ctr) const;
  std::vector<PairReport> report_c4(const Box& q, QueryCounters& ctr) const;
  std::vector<PairReport> report_c5(const Box& q, QueryCounters& ctr) const;
  /// All pairs whose common intersection meets q, each exactly once.
  std::vector<PairReport> query(const Box& q, QueryCounters& ctr) const;

  std::span<const Box> rects() const { return rects_; }
  std::span<const Stretch> stretches() const { return stretches_; }
  std::span<const Stretch> stretches_of(std::uint32_t i) const {
    return std::span<const Stretch>(stretches_).subspan(stretch_begin_[i], stretch_begin_[i + 1] - stretch_begin_[i]);
  }
  const C5Index& c5(int axis) const { return axis == 0 ? c5x_ : c5y_; }
  const RectIntersectIndex& recint() const { return recint_; }
  const StabbingStructure& ptenc() const { return ptenc_; }
  PlanarStats stats() const;

 private:
  class Emitter;

  std::vector<Box> rects_;
  StabbingStructure ptenc_;
  RectIntersectIndex recint_;
  std::vector<Stretch> stretches_;
  std::vector<std::uint32_t> stretch_begin_;
  EndpointEntryTable eptenc_;
  EndpointRangeStructure recenc_;
  CrossingStructure reccross_;
  SideWalker segint_;
  C5Index c5x_, c5y_;
};

}  // namespace bpi
