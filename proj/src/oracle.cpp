#include "bpi/oracle.hpp"

#include <algorithm>

namespace bpi::oracle {

namespace {

// Piece index by linear scan, kept separate from PieceLine::piece.
std::int32_t piece_of(const PieceLine& line, Scalar x) {
  std::int32_t k = 0;
  for (Scalar c : line.coords()) {
    if (c == x) return 2 * k + 1;
    if (c > x) break;
    ++k;
  }
  return 2 * k;
}

// The rectangle's x-extent covers every piece of v and neither vertical
// side falls inside v.
bool crosses_slab(std::int32_t a, std::int32_t b, const SlabTree::Node& nd) { return a < nd.lo && nd.hi < b; }

}  // namespace

std::vector<IdPair> pairs(std::span<const Box> boxes, const Box& q) {
  std::vector<IdPair> out;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (triple_intersects(boxes[i], boxes[j], q)) {
        const auto a = std::min(boxes[i].id, boxes[j].id), b = std::max(boxes[i].id, boxes[j].id);
        out.emplace_back(a, b);
      }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Stretch> stretches(std::span<const Box> rects) {
  std::vector<Stretch> out;
  for (std::uint32_t i = 0; i < rects.size(); ++i) {
    const Box& r = rects[i];
    const std::array<std::pair<Side, Scalar>, 4> sides{
        {{Side::Bottom, r.lo[1]}, {Side::Top, r.hi[1]}, {Side::Left, r.lo[0]}, {Side::Right, r.hi[0]}}};
    for (const auto& [side, fixed] : sides) {
      const int along = is_vertical(side) ? 1 : 0;
      const int across = 1 - along;
      bool any = false;
      Scalar lo = 0, hi = 0;
      for (std::uint32_t j = 0; j < rects.size(); ++j) {
        if (j == i) continue;
        const Box& o = rects[j];
        if (fixed < o.lo[across] || fixed > o.hi[across]) continue;
        const Scalar a = std::max(r.lo[along], o.lo[along]);
        const Scalar b = std::min(r.hi[along], o.hi[along]);
        if (a > b) continue;
        lo = any ? std::min(lo, a) : a;
        hi = any ? std::max(hi, b) : b;
        any = true;
      }
      if (any) out.push_back(Stretch{i, side, fixed, lo, hi});
    }
  }
  return out;
}

bool in_cross_set(const Box& r, const PieceLine& line, const SlabTree& tree, int axis, std::int32_t v) {
  const std::int32_t a = piece_of(line, r.lo[axis]), b = piece_of(line, r.hi[axis]);
  const auto& nd = tree.node(v);
  if (!crosses_slab(a, b, nd)) return false;
  return nd.parent < 0 || !crosses_slab(a, b, tree.node(nd.parent));
}

bool in_side_set(const Box& r, const PieceLine& line, const SlabTree& tree, int axis, std::int32_t v) {
  const std::int32_t a = piece_of(line, r.lo[axis]), b = piece_of(line, r.hi[axis]);
  const auto& nd = tree.node(v);
  if (nd.leaf()) return false;
  return (nd.lo <= a && a <= nd.hi) || (nd.lo <= b && b <= nd.hi);
}

std::vector<std::int32_t> canonical_nodes(std::span<const Box> rects, const PieceLine& line, const SlabTree& tree,
                                          int axis, std::uint32_t i, std::uint32_t j, const Box& q) {
  std::vector<std::int32_t> out;
  const std::int32_t p = piece_of(line, q.lo[axis]);
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(tree.size()); ++v) {
    const auto& nd = tree.node(v);
    if (p < nd.lo || p > nd.hi) continue;
    const bool ci = in_cross_set(rects[i], line, tree, axis, v);
    const bool cj = in_cross_set(rects[j], line, tree, axis, v);
    const bool si = ci || in_side_set(rects[i], line, tree, axis, v);
    const bool sj = cj || in_side_set(rects[j], line, tree, axis, v);
    if (si && sj && (ci || cj)) out.push_back(v);
  }
  return out;
}

GridCell canonical_cell(const Grid& grid, const Box& b) {
  GridCell c{};
  for (int t = 0; t < grid.dim(); ++t) {
    std::int32_t k = 0;
    for (Scalar v : grid.axis(t).chosen) k += (v <= b.lo[t]);
    c[t] = k;
  }
  return c;
}

std::set<GridCell> marked_cells(std::span<const Box> boxes, const Grid& grid) {
  std::set<GridCell> out;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (auto inter = intersect_boxes(boxes[i], boxes[j])) out.insert(canonical_cell(grid, *inter));
  return out;
}

std::vector<IdPair> pairs_in_cell(std::span<const Box> boxes, const Grid& grid, const GridCell& cell) {
  std::vector<IdPair> out;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      const auto inter = intersect_boxes(boxes[i], boxes[j]);
      if (inter && canonical_cell(grid, *inter) == cell)
        out.emplace_back(std::min(boxes[i].id, boxes[j].id), std::max(boxes[i].id, boxes[j].id));
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> intersecting(std::span<const Box> boxes, const Box& q) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < boxes.size(); ++i)
    if (boxes[i].intersects(q)) out.push_back(i);
  return out;
}

}  // namespace bpi::oracle
