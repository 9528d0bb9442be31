#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bpi/geometry.hpp"
#include "bpi/highdim.hpp"
#include "bpi/segment_tree.hpp"

namespace bpi::oracle {

using IdPair = std::pair<std::uint32_t, std::uint32_t>;

/// All (id_i, id_j), id_i < id_j, with S_i ∩ S_j ∩ q nonempty; sorted.
std::vector<IdPair> pairs(std::span<const Box> boxes, const Box& q);

/// Stretches by a direct scan of all other rectangles per side, in the same
/// order as compute_stretches.
std::vector<Stretch> stretches(std::span<const Box> rects);

/// Nodes satisfying the canonical-node definition for the pair (i, j)
/// (input indices) in a slab tree built over axis `axis` on `line`.
/// Membership in crossSet / sideSet is evaluated from the node's piece
/// range, not taken from the structure.
std::vector<std::int32_t> canonical_nodes(std::span<const Box> rects, const PieceLine& line, const SlabTree& tree,
                                          int axis, std::uint32_t i, std::uint32_t j, const Box& q);

/// crossSet / sideSet membership of rectangle r at node v by definition.
bool in_cross_set(const Box& r, const PieceLine& line, const SlabTree& tree, int axis, std::int32_t v);
bool in_side_set(const Box& r, const PieceLine& line, const SlabTree& tree, int axis, std::int32_t v);

/// Canonical cell of b by counting chosen values per axis.
GridCell canonical_cell(const Grid& grid, const Box& b);

/// Cells that are canonical for some nonempty pairwise intersection.
std::set<GridCell> marked_cells(std::span<const Box> boxes, const Grid& grid);

/// Pairs (ids, sorted) whose intersection has `cell` as canonical cell.
std::vector<IdPair> pairs_in_cell(std::span<const Box> boxes, const Grid& grid, const GridCell& cell);

/// Input indices of boxes meeting q.
std::vector<std::uint32_t> intersecting(std::span<const Box> boxes, const Box& q);

}  // namespace bpi::oracle
