#include "bpi/generate.hpp"

#include <algorithm>
#include <random>

namespace bpi {

namespace {

// Uniform-enough integer in [lo, hi]; modulo bias is irrelevant at these
// ranges and keeps the stream identical across standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  Scalar in(Scalar lo, Scalar hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<Scalar>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(int percent) { return in(0, 99) < percent; }

 private:
  std::mt19937_64 rng_;
};

Box blank(std::uint32_t id, int d) {
  Box b;
  b.id = id;
  b.dim = d;
  return b;
}

void set_axis(Box& b, int t, Scalar lo, Scalar hi, Scalar range) {
  lo = std::clamp<Scalar>(lo, 0, range);
  hi = std::clamp<Scalar>(hi, 0, range);
  if (lo > hi) std::swap(lo, hi);
  b.lo[t] = lo;
  b.hi[t] = hi;
}

Box uniform_box(Draw& g, std::uint32_t id, int d, Scalar range, Scalar max_extent) {
  Box b = blank(id, d);
  for (int t = 0; t < d; ++t) {
    const Scalar lo = g.in(0, range);
    set_axis(b, t, lo, lo + g.in(0, max_extent), range);
  }
  return b;
}

std::vector<Box> uniform(Draw& g, const GenParams& p) {
  const Scalar extent = p.max_extent > 0 ? p.max_extent : std::max<Scalar>(1, p.range / 4);
  std::vector<Box> out;
  for (std::size_t i = 0; i < p.n; ++i)
    out.push_back(uniform_box(g, static_cast<std::uint32_t>(i + 1), p.d, p.range, extent));
  return out;
}

// Concentric boxes around a shared center with small jitter: long chains of
// containment plus many partial overlaps near the boundary.
std::vector<Box> nested(Draw& g, const GenParams& p) {
  std::vector<Box> out;
  const Scalar half = p.range / 2;
  const Scalar jitter = std::max<Scalar>(1, p.range / 16);
  for (std::size_t i = 0; i < p.n; ++i) {
    Box b = blank(static_cast<std::uint32_t>(i + 1), p.d);
    const Scalar r = g.in(0, half);
    for (int t = 0; t < p.d; ++t) {
      const Scalar c = half + g.in(-jitter, jitter);
      set_axis(b, t, c - r - g.in(0, jitter), c + r + g.in(0, jitter), p.range);
    }
    out.push_back(b);
  }
  return out;
}

// Long thin boxes: narrow on one random axis and spanning most of the range
// on all others, so slabs in different orientations cross each other.
std::vector<Box> slabs(Draw& g, const GenParams& p) {
  std::vector<Box> out;
  const Scalar thin = std::max<Scalar>(1, p.range / 16);
  for (std::size_t i = 0; i < p.n; ++i) {
    Box b = blank(static_cast<std::uint32_t>(i + 1), p.d);
    const int narrow = static_cast<int>(g.in(0, p.d - 1));
    for (int t = 0; t < p.d; ++t) {
      if (t == narrow) {
        const Scalar lo = g.in(0, p.range);
        set_axis(b, t, lo, lo + g.in(0, thin), p.range);
      } else {
        set_axis(b, t, g.in(0, p.range / 4), p.range - g.in(0, p.range / 4), p.range);
      }
    }
    out.push_back(b);
  }
  return out;
}

std::vector<Box> clustered(Draw& g, const GenParams& p) {
  const std::size_t k = std::max<std::size_t>(1, p.n / 16);
  std::vector<Box> centers;
  for (std::size_t c = 0; c < k; ++c) {
    Box b = blank(0, p.d);
    for (int t = 0; t < p.d; ++t) b.lo[t] = g.in(0, p.range);
    centers.push_back(b);
  }
  const Scalar spread = std::max<Scalar>(1, p.range / 20);
  std::vector<Box> out;
  for (std::size_t i = 0; i < p.n; ++i) {
    const Box& c = centers[static_cast<std::size_t>(g.in(0, static_cast<Scalar>(k) - 1))];
    Box b = blank(static_cast<std::uint32_t>(i + 1), p.d);
    for (int t = 0; t < p.d; ++t) {
      const Scalar lo = c.lo[t] + g.in(-spread, spread);
      set_axis(b, t, lo, lo + g.in(0, spread), p.range);
    }
    out.push_back(b);
  }
  return out;
}

// Coordinates on a coarse lattice so values repeat; every fourth box is
// flat on at least one axis (every eighth is a point), and some boxes
// start exactly where an earlier one ends.
std::vector<Box> degenerate_heavy(Draw& g, const GenParams& p) {
  const Scalar cells = std::max<Scalar>(1, std::min<Scalar>(8, p.range));
  const Scalar unit = std::max<Scalar>(1, p.range / cells);
  auto lattice = [&] { return g.in(0, cells) * unit; };
  std::vector<Box> out;
  for (std::size_t i = 0; i < p.n; ++i) {
    Box b = blank(static_cast<std::uint32_t>(i + 1), p.d);
    const bool touch = !out.empty() && g.chance(30);
    const Box* prev = touch ? &out[static_cast<std::size_t>(g.in(0, static_cast<Scalar>(out.size()) - 1))] : nullptr;
    const int touch_axis = static_cast<int>(g.in(0, p.d - 1));
    for (int t = 0; t < p.d; ++t) {
      Scalar lo = lattice();
      if (prev && t == touch_axis) lo = prev->hi[t];
      set_axis(b, t, lo, lo + g.in(0, 2) * unit, p.range);
    }
    if (i % 8 == 0) {
      for (int t = 0; t < p.d; ++t) b.hi[t] = b.lo[t];
    } else if (i % 4 == 0) {
      const int t = static_cast<int>(g.in(0, p.d - 1));
      b.hi[t] = b.lo[t];
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace

const char* distribution_name(Distribution d) {
  switch (d) {
    case Distribution::Uniform: return "uniform";
    case Distribution::Nested: return "nested";
    case Distribution::Slabs: return "slabs";
    case Distribution::Clustered: return "clustered";
    case Distribution::DegenerateHeavy: return "degenerate-heavy";
  }
  return "?";
}

Distribution parse_distribution(std::string_view name) {
  for (auto d : kAllDistributions)
    if (name == distribution_name(d)) return d;
  throw UsageError("unknown distribution '" + std::string(name) + "'");
}

std::vector<Box> generate_boxes(const GenParams& p) {
  if (p.d < 2 || p.d > kMaxDim) throw UsageError("gen: d must be in [2, " + std::to_string(kMaxDim) + "]");
  if (p.range < 1) throw UsageError("gen: coordinate range must be positive");
  Draw g(p.seed);
  switch (p.dist) {
    case Distribution::Uniform: return uniform(g, p);
    case Distribution::Nested: return nested(g, p);
    case Distribution::Slabs: return slabs(g, p);
    case Distribution::Clustered: return clustered(g, p);
    case Distribution::DegenerateHeavy: return degenerate_heavy(g, p);
  }
  return {};
}

std::vector<Box> generate_queries(std::uint64_t seed, std::size_t count, int d, Scalar range) {
  if (d < 2 || d > kMaxDim) throw UsageError("gen: d must be in [2, " + std::to_string(kMaxDim) + "]");
  Draw g(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Box> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(uniform_box(g, static_cast<std::uint32_t>(i + 1), d, range, std::max<Scalar>(1, range / 3)));
  return out;
}

std::size_t count_degenerate(const std::vector<Box>& boxes) {
  return static_cast<std::size_t>(std::count_if(boxes.begin(), boxes.end(), [](const Box& b) {
    for (int t = 0; t < b.dim; ++t)
      if (b.lo[t] == b.hi[t]) return true;
    return false;
  }));
}

}  // namespace bpi
