#include "bpi/segment_tree.hpp"

#include <algorithm>

namespace bpi {

PieceLine::PieceLine(std::vector<Scalar> coords) : coords_(std::move(coords)) {
  std::sort(coords_.begin(), coords_.end());
  coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
}

std::int32_t PieceLine::piece(Scalar x) const {
  const auto it = std::lower_bound(coords_.begin(), coords_.end(), x);
  const auto k = static_cast<std::int32_t>(it - coords_.begin());
  return (it != coords_.end() && *it == x) ? 2 * k + 1 : 2 * k;
}

SlabTree::SlabTree(std::int32_t pieces) {
  if (pieces <= 0) return;
  nodes_.reserve(2 * static_cast<std::size_t>(pieces));
  build(0, pieces - 1, -1, 0);
}

std::int32_t SlabTree::build(std::int32_t lo, std::int32_t hi, std::int32_t parent, std::int32_t depth) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{lo, hi, -1, -1, parent, depth});
  if (lo == hi) return id;
  const std::int32_t mid = lo + (hi - lo) / 2;
  const std::int32_t l = build(lo, mid, id, depth + 1);
  const std::int32_t r = build(mid + 1, hi, id, depth + 1);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void SlabTree::canonical(std::int32_t lo, std::int32_t hi, std::vector<std::int32_t>& out) const {
  if (nodes_.empty() || lo > hi) return;
  canonical_rec(0, lo, hi, out);
}

void SlabTree::canonical_rec(std::int32_t id, std::int32_t lo, std::int32_t hi, std::vector<std::int32_t>& out) const {
  const Node& nd = nodes_[id];
  if (nd.hi < lo || nd.lo > hi) return;
  if (lo <= nd.lo && nd.hi <= hi) {
    out.push_back(id);
    return;
  }
  canonical_rec(nd.left, lo, hi, out);
  canonical_rec(nd.right, lo, hi, out);
}

void SlabTree::path(std::int32_t piece, std::vector<std::int32_t>& out) const {
  std::int32_t id = root();
  while (id >= 0) {
    out.push_back(id);
    const Node& nd = nodes_[id];
    if (nd.leaf()) break;
    id = piece <= nodes_[nd.left].hi ? nd.left : nd.right;
  }
}

}  // namespace bpi
