#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bpi/counters.hpp"
#include "bpi/enclosure.hpp"
#include "bpi/geometry.hpp"
#include "bpi/planar.hpp"
#include "bpi/range_tree.hpp"

namespace bpi {

/// Grid lines on one axis. With m chosen values c_0 < ... < c_{m-1} there
/// are m + 1 intervals: index 0 is (-inf, c_0], index k is [c_{k-1}, c_k],
/// index m is [c_{m-1}, +inf). A coordinate equal to a chosen value belongs
/// to the interval starting there.
struct GridAxis {
  int axis = 0;
  std::int64_t step = 1;
  std::vector<Scalar> chosen;

  std::int32_t interval_count() const { return static_cast<std::int32_t>(chosen.size()) + 1; }
  std::int32_t interval_of(Scalar x) const;
  Scalar interval_lo(std::int32_t k) const { return k == 0 ? kNegInf : chosen[k - 1]; }
  Scalar interval_hi(std::int32_t k) const { return k == interval_count() - 1 ? kPosInf : chosen[k]; }
  /// Facet projections strictly inside interval k.
  std::size_t strictly_inside(std::span<const Box> boxes, std::int32_t k) const;
};

/// ⌊n^{1-δ}⌋, guarded against floating error at exact powers.
std::int64_t grid_step(std::size_t n, double delta);

/// Every step-th value (1-indexed) of the sorted multiset of the 2n facet
/// projections on axis t.
GridAxis build_grid(std::span<const Box> boxes, int t, double delta);

/// One interval index per axis; unused trailing entries are zero.
using GridCell = std::array<std::int32_t, kMaxDim>;

class Grid {
 public:
  Grid() = default;
  Grid(std::span<const Box> boxes, double delta);

  int dim() const { return static_cast<int>(axes_.size()); }
  const GridAxis& axis(int t) const { return axes_[t]; }
  /// The cell containing b.lo.
  GridCell canonical_cell(const Box& b) const;
  /// Closed extent of a cell, with sentinels at ±inf.
  Box cell_box(const GridCell& c) const;

 private:
  std::vector<GridAxis> axes_;
};

/// Boxes intersecting a query box, for any d >= 2. For d = 2 this is the
/// planar RecInt. For d >= 3: a box meets q iff it contains q.lo or one of
/// its facets meets q. Facets on axis t are kept in a balanced tree over
/// their t-coordinate; each node stores a (d-1)-dimensional structure over
/// the projections of its boxes with axis t removed. Structures over at
/// most kBucket boxes, and tree nodes over at most kBucket facets, are
/// scanned directly.
class BoxIntStructure {
 public:
  static constexpr std::size_t kBucket = 128;

  BoxIntStructure() = default;
  BoxIntStructure(std::span<const Box> boxes, std::span<const std::uint32_t> payloads);
  BoxIntStructure(BoxIntStructure&&) noexcept = default;
  BoxIntStructure& operator=(BoxIntStructure&&) noexcept = default;

  /// Payloads of boxes meeting q, sorted and deduplicated.
  std::vector<std::uint32_t> report(const Box& q, QueryCounters& ctr) const;
  std::size_t stored_cells() const;

 private:
  struct FacetNode {
    std::int32_t begin, end;  // range in the axis's sorted facets
    std::int32_t left = -1, right = -1;
    std::unique_ptr<BoxIntStructure> sub;  // null for buckets
  };
  struct AxisTree {
    std::vector<std::pair<Scalar, std::uint32_t>> facets;  // (coordinate, box index)
    std::vector<FacetNode> nodes;
  };
  std::int32_t build_axis(AxisTree& tree, int t, std::int32_t b, std::int32_t e);
  void collect(const AxisTree& tree, int t, std::int32_t id, std::int32_t b, std::int32_t e, const Box& q,
               QueryCounters& ctr, std::vector<std::uint32_t>& out) const;

  int dim_ = 0;
  std::vector<Box> boxes_;
  std::vector<std::uint32_t> payloads_;
  // d = 2
  std::unique_ptr<StabbingStructure> ptenc_;
  std::unique_ptr<RectIntersectIndex> recint_;
  // d >= 3
  EnclosureIndex enclosure_;
  std::vector<AxisTree> axes_;
};

/// Per-cell pair recovery. For every axis subset F, a BoxInt over the
/// F-faces of all boxes (axes in F collapsed to the lower facet).
class PairFindStructure {
 public:
  PairFindStructure() = default;
  PairFindStructure(std::span<const Box> boxes, const Grid* grid);

  /// Calls fn(a, b) (input indices, id_a < id_b) for every pair whose
  /// intersection has `cell` as its canonical cell. Exactly once each.
  template <typename Fn>
  void query(const GridCell& cell, QueryCounters& ctr, Fn&& fn) const {
    const Box cb = grid_->cell_box(cell);
    const std::uint32_t full = (1U << dim_) - 1;
    for (std::uint32_t f = 0; f <= full; ++f) {
      const auto si = by_subset_[f].report(cb, ctr);
      if (si.empty()) continue;
      const auto sj = by_subset_[full ^ f].report(cb, ctr);
      for (auto a : si)
        for (auto b : sj) {
          if (a == b) continue;
          ++ctr.candidates;
          if (boxes_[a].id > boxes_[b].id) continue;
          if (accepts(a, b, f, cell)) fn(a, b);
        }
    }
  }
  std::size_t stored_cells() const;

 private:
  bool accepts(std::uint32_t a, std::uint32_t b, std::uint32_t f, const GridCell& cell) const;

  int dim_ = 0;
  const Grid* grid_ = nullptr;
  std::vector<Box> boxes_;
  std::vector<BoxIntStructure> by_subset_;
};

/// Axes (bitmask) on which the lower bound of I(a, b) comes from a; ties
/// go to the smaller id.
std::uint32_t facet_provenance(const Box& a, const Box& b);

struct BpiStats {
  int dim = 0;
  std::size_t n = 0;
  std::int64_t step = 0;
  std::size_t marked_cells = 0;
  std::size_t children = 0;           // over the whole recursion
  std::size_t max_slab_facets = 0;    // strictly inside one interval, any level
  std::size_t stored_cells = 0;       // over the whole recursion
  PlanarStats planar;                 // d = 2 only
};

/// The recursive structure for one dimension level (planar when d = 2).
class BpiStructure {
 public:
  /// Children over at most this many spanning boxes keep the box list and
  /// test its pairs directly instead of recursing.
  static constexpr std::size_t kChildScan = 32;

  /// Requires 1/d <= δ < 1 when d > 2.
  BpiStructure(std::vector<Box> boxes, int d, double delta);
  BpiStructure(const BpiStructure&) = delete;
  BpiStructure& operator=(const BpiStructure&) = delete;

  int dim() const { return dim_; }
  std::span<const Box> boxes() const { return boxes_; }
  const Grid& grid() const { return grid_; }
  const std::set<GridCell>& marked_cells() const { return marked_; }

  std::vector<GridCell> gridcont_query(const Box& q, QueryCounters& ctr) const;
  std::vector<PairReport> pairfind_query(const GridCell& cell, QueryCounters& ctr) const;
  std::vector<std::uint32_t> boxint_query(const Box& q, QueryCounters& ctr) const;
  std::vector<PairReport> query(const Box& q, QueryCounters& ctr) const;

  BpiStats stats() const;

 private:
  // Children keyed by (original axes kept, sorted box ids), shared across
  // one build.
  using ChildCache = std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>,
                              std::shared_ptr<const BpiStructure>>;

  BpiStructure(std::vector<Box> boxes, std::vector<int> axes, double delta, ChildCache& cache);
  void build(ChildCache& cache);
  BpiStats stats(std::unordered_set<const BpiStructure*>& counted) const;

  struct Child {
    std::vector<std::uint32_t> partial;    // meet the interval without containing it
    std::vector<std::uint32_t> scanned;    // few boxes containing the interval: pairs scanned
    std::shared_ptr<const BpiStructure> bpi;  // many boxes containing the interval, axis removed
  };
  int dim_ = 0;
  double delta_ = 0.5;
  std::vector<Box> boxes_;
  std::vector<int> axes_;  // original axis of each local axis
  std::unordered_map<std::uint32_t, std::uint32_t> index_of_;
  std::unique_ptr<PlanarStructure> planar_;
  Grid grid_;
  std::set<GridCell> marked_;
  std::vector<GridCell> marked_list_;
  KdTree gridcont_;
  std::unique_ptr<BoxIntStructure> boxint_;
  std::unique_ptr<PairFindStructure> pairfind_;
  std::vector<std::vector<Child>> children_;  // [axis][interval]
  std::size_t max_slab_facets_ = 0;
};

}  // namespace bpi
