#include "bpi/range_tree.hpp"

#include <algorithm>
#include <numeric>

namespace bpi {

struct RangeTree::Level {
  struct Node {
    Scalar key_min, key_max;
    std::int32_t begin, end;  // range in `items`
    std::int32_t left = -1, right = -1;
    std::unique_ptr<Level> assoc;
  };

  int axis = 0;
  std::vector<std::uint32_t> items;  // sorted by coordinate `axis`
  std::vector<Scalar> keys;          // coordinate `axis` of items (last axis only)
  std::vector<Node> nodes;
  std::int32_t root = -1;
};

namespace {

using Level = RangeTree::Level;

struct Builder {
  int dims;
  const std::vector<Scalar>& coords;

  Scalar at(std::uint32_t i, int t) const { return coords[std::size_t(i) * dims + t]; }

  std::unique_ptr<Level> level(int axis, std::vector<std::uint32_t> items) const {
    auto lv = std::make_unique<Level>();
    lv->axis = axis;
    std::sort(items.begin(), items.end(), [&](std::uint32_t a, std::uint32_t b) { return at(a, axis) < at(b, axis); });
    lv->items = std::move(items);
    if (axis == dims - 1) {
      lv->keys.reserve(lv->items.size());
      for (auto i : lv->items) lv->keys.push_back(at(i, axis));
      return lv;
    }
    lv->root = node(*lv, 0, static_cast<std::int32_t>(lv->items.size()));
    return lv;
  }

  std::int32_t node(Level& lv, std::int32_t b, std::int32_t e) const {
    if (b >= e) return -1;
    const auto id = static_cast<std::int32_t>(lv.nodes.size());
    lv.nodes.push_back(Level::Node{at(lv.items[b], lv.axis), at(lv.items[e - 1], lv.axis), b, e, -1, -1, nullptr});
    if (static_cast<std::uint32_t>(e - b) <= RangeTree::kBucket) return id;
    std::vector<std::uint32_t> sub(lv.items.begin() + b, lv.items.begin() + e);
    auto assoc = level(lv.axis + 1, std::move(sub));
    const std::int32_t m = b + (e - b) / 2;
    const std::int32_t l = node(lv, b, m);
    const std::int32_t r = node(lv, m, e);
    lv.nodes[id].left = l;
    lv.nodes[id].right = r;
    lv.nodes[id].assoc = std::move(assoc);
    return id;
  }
};

struct Searcher {
  int dims;
  const std::vector<Scalar>& coords;
  const std::vector<std::uint32_t>& payloads;
  std::span<const Scalar> lo, hi;
  QueryCounters& ctr;
  const std::function<void(std::uint32_t)>* fn;  // null: existence probe
  bool found = false;

  Scalar at(std::uint32_t i, int t) const { return coords[std::size_t(i) * dims + t]; }

  bool inside_from(std::uint32_t i, int axis) const {
    for (int t = axis; t < dims; ++t)
      if (at(i, t) < lo[t] || at(i, t) > hi[t]) return false;
    return true;
  }

  void emit(std::uint32_t i) {
    found = true;
    if (fn) (*fn)(payloads[i]);
  }

  void level(const Level& lv) {
    if (found && !fn) return;
    ++ctr.nodes_visited;
    if (lv.axis == dims - 1) {
      auto b = std::lower_bound(lv.keys.begin(), lv.keys.end(), lo[lv.axis]);
      auto e = std::upper_bound(lv.keys.begin(), lv.keys.end(), hi[lv.axis]);
      for (auto it = b; it != e; ++it) {
        ++ctr.list_steps;
        emit(lv.items[it - lv.keys.begin()]);
        if (!fn) return;
      }
      return;
    }
    node(lv, lv.root);
  }

  void node(const Level& lv, std::int32_t id) {
    if (id < 0 || (found && !fn)) return;
    ++ctr.nodes_visited;
    const Level::Node& nd = lv.nodes[id];
    const int t = lv.axis;
    if (nd.key_max < lo[t] || nd.key_min > hi[t]) return;
    if (!nd.assoc) {
      for (std::int32_t k = nd.begin; k < nd.end; ++k) {
        ++ctr.list_steps;
        if (inside_from(lv.items[k], t)) {
          emit(lv.items[k]);
          if (!fn) return;
        }
      }
      return;
    }
    if (lo[t] <= nd.key_min && nd.key_max <= hi[t]) {
      level(*nd.assoc);
      return;
    }
    node(lv, nd.left);
    node(lv, nd.right);
  }
};

std::size_t cells_of(const Level& lv) {
  std::size_t c = lv.items.size() + lv.keys.size() + lv.nodes.size();
  for (const auto& nd : lv.nodes)
    if (nd.assoc) c += cells_of(*nd.assoc);
  return c;
}

}  // namespace

RangeTree::RangeTree(int dims, std::vector<Scalar> coords, std::vector<std::uint32_t> payloads)
    : dims_(dims), coords_(std::move(coords)), payloads_(std::move(payloads)) {
  if (dims_ < 1) throw UsageError("range tree: dims must be positive");
  if (coords_.size() != payloads_.size() * static_cast<std::size_t>(dims_))
    throw UsageError("range tree: coordinate count mismatch");
  std::vector<std::uint32_t> items(payloads_.size());
  std::iota(items.begin(), items.end(), 0U);
  root_ = Builder{dims_, coords_}.level(0, std::move(items));
}

RangeTree::~RangeTree() = default;
RangeTree::RangeTree() = default;
RangeTree::RangeTree(RangeTree&&) noexcept = default;
RangeTree& RangeTree::operator=(RangeTree&&) noexcept = default;

void RangeTree::report(std::span<const Scalar> lo, std::span<const Scalar> hi, QueryCounters& ctr,
                       const std::function<void(std::uint32_t)>& fn) const {
  if (!root_) return;
  Searcher s{dims_, coords_, payloads_, lo, hi, ctr, &fn};
  s.level(*root_);
}

bool RangeTree::any(std::span<const Scalar> lo, std::span<const Scalar> hi, QueryCounters& ctr) const {
  if (!root_) return false;
  Searcher s{dims_, coords_, payloads_, lo, hi, ctr, nullptr};
  s.level(*root_);
  return s.found;
}

std::size_t RangeTree::stored_cells() const { return root_ ? cells_of(*root_) : 0; }

// ---------------------------------------------------------------------------

KdTree::KdTree(int dims, std::vector<Scalar> coords, std::vector<std::uint32_t> payloads)
    : dims_(dims), coords_(std::move(coords)), payloads_(std::move(payloads)) {
  if (dims_ < 1 || dims_ > kMaxDim) throw UsageError("kd-tree: bad dimension");
  order_.resize(payloads_.size());
  std::iota(order_.begin(), order_.end(), 0U);
  root_ = build(0, static_cast<std::int32_t>(order_.size()), 0);
}

std::int32_t KdTree::build(std::int32_t begin, std::int32_t end, int depth) {
  if (begin >= end) return -1;
  Node nd{begin, end};
  for (int t = 0; t < dims_; ++t) {
    nd.lo[t] = kPosInf;
    nd.hi[t] = kNegInf;
  }
  for (std::int32_t k = begin; k < end; ++k)
    for (int t = 0; t < dims_; ++t) {
      const Scalar c = coords_[std::size_t(order_[k]) * dims_ + t];
      nd.lo[t] = std::min(nd.lo[t], c);
      nd.hi[t] = std::max(nd.hi[t], c);
    }
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(nd);
  if (end - begin <= 4) return id;
  const int t = depth % dims_;
  const std::int32_t m = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + m, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return coords_[std::size_t(a) * dims_ + t] < coords_[std::size_t(b) * dims_ + t];
                   });
  const std::int32_t l = build(begin, m, depth + 1);
  const std::int32_t r = build(m, end, depth + 1);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void KdTree::visit(std::int32_t id, std::span<const Scalar> lo, std::span<const Scalar> hi, QueryCounters& ctr,
                   const std::function<void(std::uint32_t)>& fn) const {
  if (id < 0) return;
  ++ctr.nodes_visited;
  const Node& nd = nodes_[id];
  bool inside = true;
  for (int t = 0; t < dims_; ++t) {
    if (nd.hi[t] < lo[t] || nd.lo[t] > hi[t]) return;
    inside = inside && lo[t] <= nd.lo[t] && nd.hi[t] <= hi[t];
  }
  if (inside || nd.left < 0) {
    for (std::int32_t k = nd.begin; k < nd.end; ++k) {
      ++ctr.list_steps;
      const std::uint32_t i = order_[k];
      bool ok = true;
      for (int t = 0; t < dims_ && ok && !inside; ++t) {
        const Scalar c = coords_[std::size_t(i) * dims_ + t];
        ok = lo[t] <= c && c <= hi[t];
      }
      if (ok) fn(payloads_[i]);
    }
    return;
  }
  visit(nd.left, lo, hi, ctr, fn);
  visit(nd.right, lo, hi, ctr, fn);
}

void KdTree::report(std::span<const Scalar> lo, std::span<const Scalar> hi, QueryCounters& ctr,
                    const std::function<void(std::uint32_t)>& fn) const {
  visit(root_, lo, hi, ctr, fn);
}

}  // namespace bpi
