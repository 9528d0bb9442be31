#include "bpi/persistent_list.hpp"

#include <algorithm>
#include <set>

namespace bpi {

std::uint32_t PersistentActiveList::Cursor::item() const { return list_->nodes_[node_].item; }

std::uint32_t PersistentActiveList::Cursor::payload() const { return list_->items_[item()].payload; }

Scalar PersistentActiveList::Cursor::key() const { return list_->items_[item()].key; }

void PersistentActiveList::Cursor::advance() { node_ = list_->read_next(node_, version_); }

PersistentActiveList::PersistentActiveList(std::vector<Item> items, bool descending, bool with_seek)
    : descending_(descending), items_(std::move(items)) {
  const auto n = static_cast<std::uint32_t>(items_.size());
  times_.reserve(2 * n);
  for (const Item& it : items_) {
    if (it.start > it.end) throw UsageError("persistent list: item lifetime is empty");
    times_.push_back(it.start);
    times_.push_back(it.end);
  }
  std::sort(times_.begin(), times_.end());
  times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
  const auto T = static_cast<std::int32_t>(times_.size());
  heads_.assign(2 * T, -1);
  copies_.assign(n, {});

  auto time_index = [&](Scalar t) {
    return static_cast<std::int32_t>(std::lower_bound(times_.begin(), times_.end(), t) - times_.begin());
  };
  std::vector<std::vector<std::uint32_t>> starts(T), ends(T);
  for (std::uint32_t i = 0; i < n; ++i) {
    starts[time_index(items_[i].start)].push_back(i);
    ends[time_index(items_[i].end)].push_back(i);
  }

  auto before = [this](std::uint32_t a, std::uint32_t b) {
    const Item& x = items_[a];
    const Item& y = items_[b];
    if (x.key != y.key) return descending_ ? x.key > y.key : x.key < y.key;
    if (x.tie != y.tie) return x.tie < y.tie;
    return a < b;
  };
  std::set<std::uint32_t, decltype(before)> live(before);
  std::int32_t head = -1;

  auto cur = [this](std::uint32_t item) { return copies_[item].back().node; };
  auto pred = [&](std::uint32_t item) -> std::int64_t {
    auto it = live.find(item);
    if (it == live.begin()) return -1;
    return *std::prev(it);
  };

  // Point `item`'s successor pointer at `target` in version v, copying nodes
  // whose spare slot is already taken.
  auto set_next = [&](std::int64_t item, std::int32_t target, std::int32_t v) {
    while (true) {
      if (item < 0) {
        head = target;
        return;
      }
      const auto a = static_cast<std::uint32_t>(item);
      const Copy last = copies_[a].back();
      Node& nd = nodes_[last.node];
      if (last.version == v) {
        if (nd.mod_version < 0) {
          nd.next0 = target;
        } else {
          nd.mod_next = target;
        }
        return;
      }
      if (nd.mod_version < 0 || nd.mod_version == v) {
        nd.mod_version = v;
        nd.mod_next = target;
        return;
      }
      const auto fresh = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back(Node{a, target, -1, -1});
      copies_[a].push_back(Copy{v, fresh});
      target = fresh;
      item = pred(a);
    }
  };

  for (std::int32_t i = 0; i < T; ++i) {
    std::int32_t v = 2 * i;
    for (std::uint32_t e : starts[i]) {
      auto [it, inserted] = live.insert(e);
      auto nx = std::next(it);
      const std::int32_t next_node = nx == live.end() ? -1 : cur(*nx);
      const auto node = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back(Node{e, next_node, -1, -1});
      copies_[e].push_back(Copy{v, node});
      set_next(it == live.begin() ? -1 : static_cast<std::int64_t>(*std::prev(it)), node, v);
    }
    heads_[v] = head;
    v = 2 * i + 1;
    for (std::uint32_t e : ends[i]) {
      auto it = live.find(e);
      auto nx = std::next(it);
      const std::int32_t next_node = nx == live.end() ? -1 : cur(*nx);
      set_next(it == live.begin() ? -1 : static_cast<std::int64_t>(*std::prev(it)), next_node, v);
      live.erase(it);
    }
    heads_[v] = head;
  }

  if (with_seek) build_seek_index();
}

std::int32_t PersistentActiveList::version_of(Scalar t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return -1;
  const auto i = static_cast<std::int32_t>(it - times_.begin()) - 1;
  return times_[i] == t ? 2 * i : 2 * i + 1;
}

std::int32_t PersistentActiveList::read_next(std::int32_t node, std::int32_t version) const {
  const Node& nd = nodes_[node];
  if (nd.mod_version >= 0 && version >= nd.mod_version) return nd.mod_next;
  return nd.next0;
}

std::int32_t PersistentActiveList::node_at(std::uint32_t item, std::int32_t version) const {
  const auto& cs = copies_[item];
  auto it = std::upper_bound(cs.begin(), cs.end(), version,
                             [](std::int32_t v, const Copy& c) { return v < c.version; });
  return std::prev(it)->node;
}

PersistentActiveList::Cursor PersistentActiveList::at(Scalar t) const {
  const std::int32_t v = version_of(t);
  if (v < 0) return {};
  return Cursor(this, v, heads_[v]);
}

void PersistentActiveList::build_seek_index() {
  const auto versions = static_cast<std::int32_t>(heads_.size());
  seek_size_ = 1;
  while (seek_size_ < std::max(versions, 1)) seek_size_ *= 2;
  seek_nodes_.assign(2 * seek_size_, {});
  auto time_index = [&](Scalar t) {
    return static_cast<std::int32_t>(std::lower_bound(times_.begin(), times_.end(), t) - times_.begin());
  };
  for (std::uint32_t i = 0; i < items_.size(); ++i) {
    std::int32_t l = 2 * time_index(items_[i].start) + seek_size_;
    std::int32_t r = 2 * time_index(items_[i].end) + seek_size_ + 1;
    for (; l < r; l >>= 1, r >>= 1) {
      if (l & 1) seek_nodes_[l++].push_back(i);
      if (r & 1) seek_nodes_[--r].push_back(i);
    }
  }
  auto before = [this](std::uint32_t a, std::uint32_t b) {
    const Item& x = items_[a];
    const Item& y = items_[b];
    if (x.key != y.key) return descending_ ? x.key > y.key : x.key < y.key;
    if (x.tie != y.tie) return x.tie < y.tie;
    return a < b;
  };
  for (auto& bucket : seek_nodes_) std::sort(bucket.begin(), bucket.end(), before);
}

PersistentActiveList::Cursor PersistentActiveList::seek(Scalar t, Scalar key, QueryCounters* counters) const {
  if (seek_nodes_.empty()) throw UsageError("persistent list: built without seek index");
  const std::int32_t v = version_of(t);
  if (v < 0) return {};
  auto key_before = [this](std::uint32_t a, Scalar k) {
    return descending_ ? items_[a].key > k : items_[a].key < k;
  };
  auto before = [this](std::uint32_t a, std::uint32_t b) {
    const Item& x = items_[a];
    const Item& y = items_[b];
    if (x.key != y.key) return descending_ ? x.key > y.key : x.key < y.key;
    if (x.tie != y.tie) return x.tie < y.tie;
    return a < b;
  };
  std::int64_t best = -1;
  for (std::int32_t p = v + seek_size_; p >= 1; p >>= 1) {
    if (counters) ++counters->nodes_visited;
    const auto& bucket = seek_nodes_[p];
    auto it = std::lower_bound(bucket.begin(), bucket.end(), key, key_before);
    if (it == bucket.end()) continue;
    if (best < 0 || before(*it, static_cast<std::uint32_t>(best))) best = *it;
  }
  if (best < 0) return Cursor(this, v, -1);
  return Cursor(this, v, node_at(static_cast<std::uint32_t>(best), v));
}

std::size_t PersistentActiveList::stored_cells() const {
  std::size_t cells = nodes_.size() + heads_.size();
  for (const auto& b : seek_nodes_) cells += b.size();
  return cells;
}

}  // namespace bpi
