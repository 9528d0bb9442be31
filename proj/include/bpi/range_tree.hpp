#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "bpi/counters.hpp"
#include "bpi/geometry.hpp"

namespace bpi {

/// Static layered range tree over k-dimensional points with closed box
/// queries, O(log^k n + K) without fractional cascading. Subtrees with at
/// most `kBucket` points are scanned directly.
class RangeTree {
 public:
  static constexpr std::uint32_t kBucket = 8;

  RangeTree();
  /// `coords` holds point i at [i*dims, (i+1)*dims).
  RangeTree(int dims, std::vector<Scalar> coords, std::vector<std::uint32_t> payloads);
  RangeTree(RangeTree&&) noexcept;
  RangeTree& operator=(RangeTree&&) noexcept;
  ~RangeTree();

  std::size_t size() const { return payloads_.size(); }
  int dims() const { return dims_; }

  void report(std::span<const Scalar> lo, std::span<const Scalar> hi, QueryCounters& ctr,
              const std::function<void(std::uint32_t)>& fn) const;
  bool any(std::span<const Scalar> lo, std::span<const Scalar> hi, QueryCounters& ctr) const;

  std::size_t stored_cells() const;

  struct Level;

 private:
  int dims_ = 0;
  std::vector<Scalar> coords_;
  std::vector<std::uint32_t> payloads_;
  std::unique_ptr<Level> root_;
};

/// Static kd-tree over k-dimensional points; linear space, closed box queries.
class KdTree {
 public:
  KdTree() = default;
  KdTree(int dims, std::vector<Scalar> coords, std::vector<std::uint32_t> payloads);

  std::size_t size() const { return payloads_.size(); }
  void report(std::span<const Scalar> lo, std::span<const Scalar> hi, QueryCounters& ctr,
              const std::function<void(std::uint32_t)>& fn) const;
  std::size_t stored_cells() const { return order_.size() + nodes_.size(); }

 private:
  struct Node {
    std::int32_t begin, end;  // range in order_
    std::int32_t left = -1, right = -1;
    std::array<Scalar, kMaxDim> lo{}, hi{};  // bounding box
  };
  std::int32_t build(std::int32_t begin, std::int32_t end, int depth);
  void visit(std::int32_t id, std::span<const Scalar> lo, std::span<const Scalar> hi, QueryCounters& ctr,
             const std::function<void(std::uint32_t)>& fn) const;

  int dims_ = 0;
  std::vector<Scalar> coords_;
  std::vector<std::uint32_t> payloads_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace bpi
