#include "bpi/enclosure.hpp"

namespace bpi {

EnclosureIndex::EnclosureIndex(std::span<const Box> boxes, std::span<const std::uint32_t> payloads, int first_axis)
    : axis_(first_axis) {
  if (boxes.size() != payloads.size()) throw UsageError("enclosure: payload count mismatch");
  const int dim = boxes.empty() ? first_axis + 1 : boxes.front().dim;
  last_axis_ = dim - 1;
  if (axis_ == last_axis_) {
    std::vector<PersistentActiveList::Item> items;
    items.reserve(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i)
      items.push_back({static_cast<Scalar>(boxes[i].id), boxes[i].id, boxes[i].lo[axis_], boxes[i].hi[axis_],
                       payloads[i]});
    list_ = PersistentActiveList(std::move(items));
    return;
  }

  std::vector<Scalar> xs;
  xs.reserve(2 * boxes.size());
  for (const Box& b : boxes) {
    xs.push_back(b.lo[axis_]);
    xs.push_back(b.hi[axis_]);
  }
  line_ = PieceLine(std::move(xs));
  tree_ = SlabTree(line_.piece_count());
  std::vector<std::vector<std::uint32_t>> at_node(tree_.size());
  std::vector<std::int32_t> canon;
  for (std::uint32_t i = 0; i < boxes.size(); ++i) {
    canon.clear();
    tree_.canonical(line_.piece(boxes[i].lo[axis_]), line_.piece(boxes[i].hi[axis_]), canon);
    for (auto v : canon) at_node[v].push_back(i);
    placements_ += canon.size();
  }
  children_.resize(tree_.size());
  std::vector<Box> sub;
  std::vector<std::uint32_t> sub_payloads;
  for (std::size_t v = 0; v < tree_.size(); ++v) {
    if (at_node[v].empty()) continue;
    sub.clear();
    sub_payloads.clear();
    for (auto i : at_node[v]) {
      sub.push_back(boxes[i]);
      sub_payloads.push_back(payloads[i]);
    }
    children_[v] = std::make_unique<EnclosureIndex>(sub, sub_payloads, axis_ + 1);
  }
}

void EnclosureIndex::report(std::span<const Scalar> p, QueryCounters& ctr,
                            const std::function<void(std::uint32_t)>& fn) const {
  if (axis_ == last_axis_) {
    ++ctr.nodes_visited;
    for (auto c = list_.at(p[axis_]); c; c.advance()) {
      ++ctr.list_steps;
      fn(c.payload());
    }
    return;
  }
  if (tree_.size() == 0) return;
  std::vector<std::int32_t> path;
  tree_.path(line_.piece(p[axis_]), path);
  for (auto v : path) {
    ++ctr.nodes_visited;
    if (children_[v]) children_[v]->report(p, ctr, fn);
  }
}

bool EnclosureIndex::any(std::span<const Scalar> p, QueryCounters& ctr) const {
  if (axis_ == last_axis_) {
    ++ctr.nodes_visited;
    return list_.any_at(p[axis_]);
  }
  if (tree_.size() == 0) return false;
  std::vector<std::int32_t> path;
  tree_.path(line_.piece(p[axis_]), path);
  for (auto v : path) {
    ++ctr.nodes_visited;
    if (children_[v] && children_[v]->any(p, ctr)) return true;
  }
  return false;
}

std::vector<PersistentActiveList::Cursor> EnclosureIndex::entries(std::span<const Scalar> p) const {
  if (last_axis_ - axis_ != 1) throw UsageError("enclosure: entry table needs a planar structure");
  std::vector<PersistentActiveList::Cursor> out;
  if (tree_.size() == 0) return out;
  std::vector<std::int32_t> path;
  tree_.path(line_.piece(p[axis_]), path);
  for (auto v : path) {
    if (!children_[v]) continue;
    auto c = children_[v]->list_.at(p[last_axis_]);
    if (c) out.push_back(c);
  }
  return out;
}

std::size_t EnclosureIndex::stored_cells() const {
  if (axis_ == last_axis_) return list_.stored_cells();
  std::size_t c = tree_.size() + placements_;
  for (const auto& ch : children_)
    if (ch) c += ch->stored_cells();
  return c;
}

}  // namespace bpi
