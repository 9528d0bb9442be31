#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bpi/geometry.hpp"

namespace bpi {

/// Splits the line at a sorted set of distinct coordinates into elementary
/// pieces: gap, point x_0, gap, point x_1, ..., point x_{m-1}, gap. Piece
/// 2k+1 is the point x_k; even pieces are open gaps. Any closed interval
/// whose endpoints are among the coordinates is a contiguous piece range.
class PieceLine {
 public:
  PieceLine() = default;
  explicit PieceLine(std::vector<Scalar> coords);

  std::int32_t piece(Scalar x) const;
  std::int32_t piece_count() const { return 2 * static_cast<std::int32_t>(coords_.size()) + 1; }
  std::span<const Scalar> coords() const { return coords_; }

 private:
  std::vector<Scalar> coords_;
};

/// Balanced binary tree over piece indices [0, P). Node slabs are contiguous
/// piece ranges; leaves are single pieces.
class SlabTree {
 public:
  struct Node {
    std::int32_t lo, hi;  // piece range, inclusive
    std::int32_t left = -1, right = -1, parent = -1;
    std::int32_t depth = 0;
    bool leaf() const { return left < 0; }
  };

  SlabTree() = default;
  explicit SlabTree(std::int32_t pieces);

  std::int32_t root() const { return nodes_.empty() ? -1 : 0; }
  const Node& node(std::int32_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  /// Maximal nodes whose range lies inside [lo, hi] (canonical decomposition).
  void canonical(std::int32_t lo, std::int32_t hi, std::vector<std::int32_t>& out) const;
  /// Nodes from the root down to the leaf holding `piece`.
  void path(std::int32_t piece, std::vector<std::int32_t>& out) const;

 private:
  std::int32_t build(std::int32_t lo, std::int32_t hi, std::int32_t parent, std::int32_t depth);
  void canonical_rec(std::int32_t id, std::int32_t lo, std::int32_t hi, std::vector<std::int32_t>& out) const;

  std::vector<Node> nodes_;
};

}  // namespace bpi
