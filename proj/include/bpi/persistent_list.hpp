#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bpi/counters.hpp"
#include "bpi/geometry.hpp"

namespace bpi {

/// Partially persistent sorted singly linked list built by a sweep.
///
/// Each item lives during the closed time interval [start, end]. The version
/// at time t holds exactly the items with start <= t <= end, ordered by
/// (key, tie) ascending, or by key descending then tie ascending when built
/// with `descending`. Persistence uses node copying with one spare pointer
/// slot per node, so the structure has O(#items) nodes and every walk step
/// is O(1).
class PersistentActiveList {
 public:
  struct Item {
    Scalar key = 0;
    std::uint32_t tie = 0;
    Scalar start = 0;
    Scalar end = 0;
    std::uint32_t payload = 0;
  };

  /// Read position inside one version.
  class Cursor {
   public:
    Cursor() = default;
    bool valid() const { return node_ >= 0; }
    explicit operator bool() const { return valid(); }
    std::uint32_t item() const;
    std::uint32_t payload() const;
    Scalar key() const;
    void advance();

   private:
    friend class PersistentActiveList;
    Cursor(const PersistentActiveList* list, std::int32_t version, std::int32_t node)
        : list_(list), version_(version), node_(node) {}
    const PersistentActiveList* list_ = nullptr;
    std::int32_t version_ = -1;
    std::int32_t node_ = -1;
  };

  PersistentActiveList() = default;
  explicit PersistentActiveList(std::vector<Item> items, bool descending = false, bool with_seek = false);

  std::size_t size() const { return items_.size(); }
  const Item& item(std::uint32_t i) const { return items_[i]; }

  /// First element of the version at time t (invalid cursor if empty).
  Cursor at(Scalar t) const;
  bool any_at(Scalar t) const { return at(t).valid(); }

  /// First element of the version at time t whose key is >= `key`
  /// (ascending) or <= `key` (descending). Requires `with_seek`.
  Cursor seek(Scalar t, Scalar key, QueryCounters* counters = nullptr) const;

  /// Stored cells: list nodes + version heads + seek index entries.
  std::size_t stored_cells() const;

 private:
  struct Node {
    std::uint32_t item;
    std::int32_t next0;
    std::int32_t mod_version;  // -1 when the spare slot is unused
    std::int32_t mod_next;
  };
  struct Copy {
    std::int32_t version;
    std::int32_t node;
  };

  std::int32_t version_of(Scalar t) const;
  std::int32_t read_next(std::int32_t node, std::int32_t version) const;
  std::int32_t node_at(std::uint32_t item, std::int32_t version) const;
  void build_seek_index();

  bool descending_ = false;
  std::vector<Item> items_;
  std::vector<Scalar> times_;             // distinct event times
  std::vector<Node> nodes_;
  std::vector<std::int32_t> heads_;       // head node per version
  std::vector<std::vector<Copy>> copies_;  // per item: nodes in creation order

  // Seek index: segment tree over versions; each node keeps its items sorted
  // by list order.
  std::vector<std::vector<std::uint32_t>> seek_nodes_;
  std::int32_t seek_size_ = 0;
};

}  // namespace bpi
