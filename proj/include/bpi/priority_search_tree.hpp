#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bpi/counters.hpp"
#include "bpi/geometry.hpp"

namespace bpi {

/// Static priority search tree answering three-sided queries
/// key in [key_lo, key_hi], value >= value_min in O(log n + K).
class PrioritySearchTree {
 public:
  struct Point {
    Scalar key;
    Scalar value;
    std::uint32_t payload;
  };

  PrioritySearchTree() = default;
  explicit PrioritySearchTree(std::vector<Point> points) {
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.key < b.key; });
    nodes_.reserve(points.size());
    root_ = build(points, 0, static_cast<std::int32_t>(points.size()));
  }

  std::size_t size() const { return nodes_.size(); }

  template <typename Fn>
  void report(Scalar key_lo, Scalar key_hi, Scalar value_min, QueryCounters& ctr, Fn&& fn) const {
    visit(root_, key_lo, key_hi, value_min, ctr, fn);
  }

  bool any(Scalar key_lo, Scalar key_hi, Scalar value_min, QueryCounters& ctr) const {
    return probe(root_, key_lo, key_hi, value_min, ctr);
  }

 private:
  struct Node {
    Point point;
    Scalar key_min, key_max;  // over the subtree
    std::int32_t left = -1, right = -1;
  };

  // Builds over the key-sorted range [l, r); the node keeps the max-value
  // point and the rest is split at the median.
  std::int32_t build(std::vector<Point>& pts, std::int32_t l, std::int32_t r) {
    if (l >= r) return -1;
    std::int32_t best = l;
    for (std::int32_t i = l + 1; i < r; ++i)
      if (pts[i].value > pts[best].value) best = i;
    const Point top = pts[best];
    const Scalar kmin = pts[l].key, kmax = pts[r - 1].key;
    std::rotate(pts.begin() + best, pts.begin() + best + 1, pts.begin() + r);  // keep key order
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{top, kmin, kmax, -1, -1});
    const std::int32_t m = l + (r - 1 - l) / 2;
    const std::int32_t left = build(pts, l, m);
    const std::int32_t right = build(pts, m, r - 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  template <typename Fn>
  void visit(std::int32_t id, Scalar klo, Scalar khi, Scalar vmin, QueryCounters& ctr, Fn& fn) const {
    while (id >= 0) {
      ++ctr.nodes_visited;
      const Node& nd = nodes_[id];
      if (nd.point.value < vmin || nd.key_max < klo || nd.key_min > khi) return;
      if (nd.point.key >= klo && nd.point.key <= khi) fn(nd.point.payload);
      visit(nd.left, klo, khi, vmin, ctr, fn);
      id = nd.right;
    }
  }

  bool probe(std::int32_t id, Scalar klo, Scalar khi, Scalar vmin, QueryCounters& ctr) const {
    if (id < 0) return false;
    ++ctr.nodes_visited;
    const Node& nd = nodes_[id];
    if (nd.point.value < vmin || nd.key_max < klo || nd.key_min > khi) return false;
    if (nd.point.key >= klo && nd.point.key <= khi) return true;
    return probe(nd.left, klo, khi, vmin, ctr) || probe(nd.right, klo, khi, vmin, ctr);
  }

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace bpi
