#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpi {

using Scalar = std::int64_t;

inline constexpr int kMaxDim = 8;
inline constexpr Scalar kNegInf = INT64_MIN / 4;
inline constexpr Scalar kPosInf = INT64_MAX / 4;

/// Raised for precondition violations (dimension mismatch, bad parameters).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed axis-parallel box with exact integer coordinates. Degenerate
/// extents (lo == hi) are legal.
struct Box {
  std::uint32_t id = 0;
  int dim = 0;
  std::array<Scalar, kMaxDim> lo{};
  std::array<Scalar, kMaxDim> hi{};

  Box() = default;
  Box(std::uint32_t id_, std::span<const Scalar> lo_, std::span<const Scalar> hi_);

  static Box make2(std::uint32_t id, Scalar x0, Scalar x1, Scalar y0, Scalar y1);
  static Box point2(Scalar x, Scalar y) { return make2(0, x, x, y, y); }

  bool valid() const;
  bool contains_point(std::span<const Scalar> p) const;
  bool contains(const Box& other) const;
  bool intersects(const Box& other) const;

  /// Copy with axis `t` removed (projection onto the hyperplane orthogonal to it).
  Box drop_axis(int t) const;
  /// Copy with axes 0 and 1 exchanged.
  Box transposed() const;

  friend bool operator==(const Box& a, const Box& b);
};

std::string to_string(const Box& b);

std::optional<Box> intersect_boxes(const Box& a, const Box& b);
bool triple_intersects(const Box& a, const Box& b, const Box& q);

enum class Tag : std::uint8_t { C1, C2, C3, C4, C5, HdCase1, HdCase2 };
const char* tag_name(Tag t);

/// Unordered output pair, `i < j` (box ids).
struct PairReport {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  Tag tag = Tag::C1;

  static PairReport make(std::uint32_t a, std::uint32_t b, Tag t) {
    return a < b ? PairReport{a, b, t} : PairReport{b, a, t};
  }
  std::uint64_t key() const { return (std::uint64_t(i) << 32) | j; }
};

inline std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return a < b ? (std::uint64_t(a) << 32) | b : (std::uint64_t(b) << 32) | a;
}

// ---------------------------------------------------------------------------
// Planar stretches and the five intersection configurations.

enum class Side : std::uint8_t { Bottom, Top, Left, Right };

inline bool is_vertical(Side s) { return s == Side::Left || s == Side::Right; }

/// Maximal piece of a rectangle side lying between its extreme intersection
/// points with other input rectangles. A vertical stretch lives on x = fixed
/// with y in [lo, hi]; a horizontal one on y = fixed with x in [lo, hi].
struct Stretch {
  std::uint32_t owner = 0;  // index into the input vector
  Side side = Side::Bottom;
  Scalar fixed = 0;
  Scalar lo = 0;
  Scalar hi = 0;

  bool vertical() const { return is_vertical(side); }
  std::array<Scalar, 2> endpoint(int which) const;
  Box as_box() const;
  /// Crossing predicate used by configuration C3 and the crossing structure.
  bool crosses(const Box& q) const;

  friend bool operator==(const Stretch&, const Stretch&) = default;
};

/// Bitmask over {C1..C5}; bit m-1 set iff configuration Cm holds.
using ConfigSet = std::uint8_t;

inline bool has_config(ConfigSet s, Tag t) { return (s >> static_cast<int>(t)) & 1U; }

/// Membership of the triple (si, sj, q) in each configuration. C2 is the
/// condition the C2 reporting routine enumerates: some stretch of one
/// rectangle has an endpoint in q and the other rectangle meets stretch ∩ q.
ConfigSet config_membership(const Box& si, const Box& sj, std::span<const Stretch> stretches_i,
                            std::span<const Stretch> stretches_j, const Box& q);

/// Highest-priority configuration of a nonempty membership set.
std::optional<Tag> dedup_tag(ConfigSet membership);

std::optional<Tag> dedup_tag(const Box& si, const Box& sj, std::span<const Stretch> stretches_i,
                             std::span<const Stretch> stretches_j, const Box& q);

}  // namespace bpi
