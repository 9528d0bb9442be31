#include "bpi/highdim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace bpi {

namespace {

std::vector<std::uint32_t> iota_payloads(std::size_t n) {
  std::vector<std::uint32_t> p(n);
  for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Box clip(const Box& a, const Box& b) {
  auto r = intersect_boxes(a, b);
  if (!r) throw std::logic_error("clip: boxes are disjoint");
  return *r;
}

}  // namespace

// ---------------------------------------------------------------- grid

std::int32_t GridAxis::interval_of(Scalar x) const {
  return static_cast<std::int32_t>(std::upper_bound(chosen.begin(), chosen.end(), x) - chosen.begin());
}

std::size_t GridAxis::strictly_inside(std::span<const Box> boxes, std::int32_t k) const {
  const Scalar lo = interval_lo(k), hi = interval_hi(k);
  std::size_t c = 0;
  for (const Box& b : boxes) {
    c += (b.lo[axis] > lo && b.lo[axis] < hi);
    c += (b.hi[axis] > lo && b.hi[axis] < hi);
  }
  return c;
}

std::int64_t grid_step(std::size_t n, double delta) {
  if (n == 0) return 1;
  const auto s = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), 1.0 - delta) + 1e-9));
  return std::max<std::int64_t>(1, s);
}

GridAxis build_grid(std::span<const Box> boxes, int t, double delta) {
  GridAxis g;
  g.axis = t;
  g.step = grid_step(boxes.size(), delta);
  std::vector<Scalar> proj;
  proj.reserve(2 * boxes.size());
  for (const Box& b : boxes) {
    proj.push_back(b.lo[t]);
    proj.push_back(b.hi[t]);
  }
  std::sort(proj.begin(), proj.end());
  for (std::size_t k = static_cast<std::size_t>(g.step); k <= proj.size(); k += static_cast<std::size_t>(g.step))
    if (g.chosen.empty() || g.chosen.back() != proj[k - 1]) g.chosen.push_back(proj[k - 1]);
  return g;
}

Grid::Grid(std::span<const Box> boxes, double delta) {
  if (boxes.empty()) return;
  for (int t = 0; t < boxes.front().dim; ++t) axes_.push_back(build_grid(boxes, t, delta));
}

GridCell Grid::canonical_cell(const Box& b) const {
  GridCell c{};
  for (int t = 0; t < dim(); ++t) c[t] = axes_[t].interval_of(b.lo[t]);
  return c;
}

Box Grid::cell_box(const GridCell& c) const {
  Box b;
  b.dim = dim();
  for (int t = 0; t < dim(); ++t) {
    b.lo[t] = axes_[t].interval_lo(c[t]);
    b.hi[t] = axes_[t].interval_hi(c[t]);
  }
  return b;
}

// ---------------------------------------------------------------- BoxInt

BoxIntStructure::BoxIntStructure(std::span<const Box> boxes, std::span<const std::uint32_t> payloads)
    : boxes_(boxes.begin(), boxes.end()), payloads_(payloads.begin(), payloads.end()) {
  if (boxes.size() != payloads.size()) throw UsageError("boxint: payload count mismatch");
  if (boxes_.empty()) return;
  dim_ = boxes_.front().dim;
  if (dim_ < 2) throw UsageError("boxint: dimension must be at least 2");
  if (boxes_.size() <= kBucket) return;
  if (dim_ == 2) {
    ptenc_ = std::make_unique<StabbingStructure>(boxes_);
    recint_ = std::make_unique<RectIntersectIndex>(boxes_, ptenc_.get());
    return;
  }
  const auto local = iota_payloads(boxes_.size());
  enclosure_ = EnclosureIndex(boxes_, local);
  axes_.resize(dim_);
  for (int t = 0; t < dim_; ++t) {
    AxisTree& tree = axes_[t];
    for (std::uint32_t i = 0; i < boxes_.size(); ++i) {
      tree.facets.emplace_back(boxes_[i].lo[t], i);
      if (boxes_[i].hi[t] != boxes_[i].lo[t]) tree.facets.emplace_back(boxes_[i].hi[t], i);
    }
    std::sort(tree.facets.begin(), tree.facets.end());
    tree.nodes.reserve(2 * tree.facets.size() / kBucket + 2);
    build_axis(tree, t, 0, static_cast<std::int32_t>(tree.facets.size()));
  }
}

std::int32_t BoxIntStructure::build_axis(AxisTree& tree, int t, std::int32_t b, std::int32_t e) {
  const auto id = static_cast<std::int32_t>(tree.nodes.size());
  tree.nodes.push_back(FacetNode{b, e, -1, -1, nullptr});
  if (static_cast<std::size_t>(e - b) <= kBucket) return id;
  std::vector<std::uint32_t> members;
  for (auto k = b; k < e; ++k) members.push_back(tree.facets[k].second);
  sort_unique(members);
  std::vector<Box> proj;
  proj.reserve(members.size());
  for (auto i : members) proj.push_back(boxes_[i].drop_axis(t));
  auto sub = std::make_unique<BoxIntStructure>(proj, members);
  const std::int32_t m = b + (e - b) / 2;
  const std::int32_t l = build_axis(tree, t, b, m);
  const std::int32_t r = build_axis(tree, t, m, e);
  tree.nodes[id].left = l;
  tree.nodes[id].right = r;
  tree.nodes[id].sub = std::move(sub);
  return id;
}

void BoxIntStructure::collect(const AxisTree& tree, int t, std::int32_t id, std::int32_t b, std::int32_t e,
                              const Box& q, QueryCounters& ctr, std::vector<std::uint32_t>& out) const {
  const FacetNode& nd = tree.nodes[id];
  ++ctr.nodes_visited;
  if (nd.end <= b || nd.begin >= e) return;
  if (!nd.sub) {
    for (auto k = std::max(nd.begin, b); k < std::min(nd.end, e); ++k) {
      ++ctr.list_steps;
      const auto i = tree.facets[k].second;
      if (boxes_[i].intersects(q)) out.push_back(i);
    }
    return;
  }
  if (b <= nd.begin && nd.end <= e) {
    const auto found = nd.sub->report(q.drop_axis(t), ctr);
    out.insert(out.end(), found.begin(), found.end());
    return;
  }
  collect(tree, t, nd.left, b, e, q, ctr, out);
  collect(tree, t, nd.right, b, e, q, ctr, out);
}

std::vector<std::uint32_t> BoxIntStructure::report(const Box& q, QueryCounters& ctr) const {
  std::vector<std::uint32_t> local;
  if (boxes_.empty()) return local;
  if (q.dim != dim_) throw UsageError("boxint: query dimension mismatch");
  if (boxes_.size() <= kBucket) {
    ++ctr.nodes_visited;
    for (std::uint32_t i = 0; i < boxes_.size(); ++i) {
      ++ctr.list_steps;
      if (boxes_[i].intersects(q)) local.push_back(i);
    }
  } else if (dim_ == 2) {
    local = recint_->report(q, ctr);
  } else {
    enclosure_.report(std::span<const Scalar>(q.lo.data(), dim_), ctr, [&](std::uint32_t i) { local.push_back(i); });
    for (int t = 0; t < dim_; ++t) {
      const AxisTree& tree = axes_[t];
      const auto lo = std::lower_bound(tree.facets.begin(), tree.facets.end(), std::make_pair(q.lo[t], 0U));
      const auto hi = std::upper_bound(tree.facets.begin(), tree.facets.end(),
                                       std::make_pair(q.hi[t], std::numeric_limits<std::uint32_t>::max()));
      const auto b = static_cast<std::int32_t>(lo - tree.facets.begin());
      const auto e = static_cast<std::int32_t>(hi - tree.facets.begin());
      if (b < e) collect(tree, t, 0, b, e, q, ctr, local);
    }
  }
  std::vector<std::uint32_t> out;
  out.reserve(local.size());
  for (auto i : local) out.push_back(payloads_[i]);
  sort_unique(out);
  return out;
}

std::size_t BoxIntStructure::stored_cells() const {
  std::size_t c = boxes_.size();
  if (recint_) c += recint_->stored_cells() + ptenc_->stored_cells();
  if (dim_ >= 3 && boxes_.size() > kBucket) c += enclosure_.stored_cells();
  for (const auto& tree : axes_) {
    c += tree.facets.size() + tree.nodes.size();
    for (const auto& nd : tree.nodes)
      if (nd.sub) c += nd.sub->stored_cells();
  }
  return c;
}

// ---------------------------------------------------------------- PairFind

std::uint32_t facet_provenance(const Box& a, const Box& b) {
  std::uint32_t mask = 0;
  for (int t = 0; t < a.dim; ++t)
    if (a.lo[t] > b.lo[t] || (a.lo[t] == b.lo[t] && a.id < b.id)) mask |= 1U << t;
  return mask;
}

PairFindStructure::PairFindStructure(std::span<const Box> boxes, const Grid* grid)
    : grid_(grid), boxes_(boxes.begin(), boxes.end()) {
  dim_ = grid->dim();
  if (boxes_.empty()) return;
  const auto payloads = iota_payloads(boxes_.size());
  const std::uint32_t subsets = 1U << dim_;
  by_subset_.reserve(subsets);
  std::vector<Box> faces(boxes_.size());
  for (std::uint32_t f = 0; f < subsets; ++f) {
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
      faces[i] = boxes_[i];
      for (int t = 0; t < dim_; ++t)
        if (f & (1U << t)) faces[i].hi[t] = faces[i].lo[t];
    }
    by_subset_.emplace_back(faces, payloads);
  }
}

bool PairFindStructure::accepts(std::uint32_t a, std::uint32_t b, std::uint32_t f, const GridCell& cell) const {
  const auto inter = intersect_boxes(boxes_[a], boxes_[b]);
  if (!inter) return false;
  if (grid_->canonical_cell(*inter) != cell) return false;
  return facet_provenance(boxes_[a], boxes_[b]) == f;
}

std::size_t PairFindStructure::stored_cells() const {
  std::size_t c = 0;
  for (const auto& s : by_subset_) c += s.stored_cells();
  return c;
}

// ---------------------------------------------------------------- BPI

BpiStructure::BpiStructure(std::vector<Box> boxes, int d, double delta) : dim_(d), delta_(delta), boxes_(std::move(boxes)) {
  if (d < 2 || d > kMaxDim) throw UsageError("bpi: dimension must be in [2, " + std::to_string(kMaxDim) + "]");
  if (d > 2 && !(delta >= 1.0 / d - 1e-12 && delta < 1.0))
    throw UsageError("bpi: delta must satisfy 1/d <= delta < 1");
  for (int t = 0; t < d; ++t) axes_.push_back(t);
  ChildCache cache;
  build(cache);
}

BpiStructure::BpiStructure(std::vector<Box> boxes, std::vector<int> axes, double delta, ChildCache& cache)
    : dim_(static_cast<int>(axes.size())), delta_(delta), boxes_(std::move(boxes)), axes_(std::move(axes)) {
  build(cache);
}

void BpiStructure::build(ChildCache& cache) {
  const double delta = delta_;
  for (std::uint32_t i = 0; i < boxes_.size(); ++i) {
    if (boxes_[i].dim != dim_ || !boxes_[i].valid()) throw UsageError("bpi: invalid box " + to_string(boxes_[i]));
    if (!index_of_.emplace(boxes_[i].id, i).second)
      throw UsageError("bpi: duplicate id " + std::to_string(boxes_[i].id));
  }
  if (dim_ == 2) {
    planar_ = std::make_unique<PlanarStructure>(boxes_);
    return;
  }

  grid_ = Grid(boxes_, delta);
  const std::int64_t step = grid_step(boxes_.size(), delta);
  for (int t = 0; t < dim_ && !boxes_.empty(); ++t) {
    const GridAxis& ax = grid_.axis(t);
    for (std::int32_t k = 0; k < ax.interval_count(); ++k) {
      const std::size_t inside = ax.strictly_inside(boxes_, k);
      max_slab_facets_ = std::max(max_slab_facets_, inside);
      if (inside > static_cast<std::size_t>(2 * step))
        throw std::logic_error("bpi: slab population bound violated on axis " + std::to_string(t));
    }
  }

  for (std::size_t i = 0; i < boxes_.size(); ++i)
    for (std::size_t j = i + 1; j < boxes_.size(); ++j)
      if (auto inter = intersect_boxes(boxes_[i], boxes_[j])) marked_.insert(grid_.canonical_cell(*inter));
  marked_list_.assign(marked_.begin(), marked_.end());
  std::vector<Scalar> coords;
  coords.reserve(marked_list_.size() * dim_);
  for (const auto& c : marked_list_)
    for (int t = 0; t < dim_; ++t) coords.push_back(c[t]);
  gridcont_ = KdTree(dim_, std::move(coords), iota_payloads(marked_list_.size()));

  boxint_ = std::make_unique<BoxIntStructure>(boxes_, iota_payloads(boxes_.size()));
  pairfind_ = std::make_unique<PairFindStructure>(boxes_, &grid_);

  children_.resize(boxes_.empty() ? 0 : dim_);
  for (int t = 0; t < static_cast<int>(children_.size()); ++t) {
    const GridAxis& ax = grid_.axis(t);
    children_[t].resize(ax.interval_count());
    std::vector<int> child_axes = axes_;
    child_axes.erase(child_axes.begin() + t);
    std::uint32_t kept = 0;
    for (int a : child_axes) kept |= 1U << a;
    for (std::int32_t k = 0; k < ax.interval_count(); ++k) {
      const Scalar lo = ax.interval_lo(k), hi = ax.interval_hi(k);
      Child& ch = children_[t][k];
      std::vector<Box> spanning;
      std::vector<std::uint32_t> spanning_index, spanning_ids;
      for (std::uint32_t i = 0; i < boxes_.size(); ++i) {
        const Box& b = boxes_[i];
        if (b.hi[t] < lo || b.lo[t] > hi) continue;
        if (b.lo[t] <= lo && b.hi[t] >= hi) {
          spanning.push_back(b.drop_axis(t));
          spanning_index.push_back(i);
          spanning_ids.push_back(b.id);
        } else {
          ch.partial.push_back(i);
        }
      }
      bool has_pair = false;
      for (std::size_t a = 0; a < spanning.size() && !has_pair; ++a)
        for (std::size_t b = a + 1; b < spanning.size() && !has_pair; ++b)
          has_pair = spanning[a].intersects(spanning[b]);
      if (!has_pair) continue;
      if (spanning.size() <= kChildScan) {
        ch.scanned = std::move(spanning_index);
        continue;
      }
      // The same boxes projected onto the same axes can come up under
      // several intervals and parents; they share one child.
      std::sort(spanning_ids.begin(), spanning_ids.end());
      auto& shared = cache[{kept, std::move(spanning_ids)}];
      if (!shared) shared.reset(new BpiStructure(std::move(spanning), child_axes, delta, cache));
      ch.bpi = shared;
    }
  }
}

std::vector<GridCell> BpiStructure::gridcont_query(const Box& q, QueryCounters& ctr) const {
  std::vector<GridCell> out;
  if (planar_ || marked_list_.empty()) return out;
  std::vector<Scalar> lo(dim_), hi(dim_);
  for (int t = 0; t < dim_; ++t) {
    const auto& ch = grid_.axis(t).chosen;
    lo[t] = std::lower_bound(ch.begin(), ch.end(), q.lo[t]) - ch.begin() + 1;
    hi[t] = std::upper_bound(ch.begin(), ch.end(), q.hi[t]) - ch.begin() - 1;
    if (lo[t] > hi[t]) return out;
  }
  gridcont_.report(lo, hi, ctr, [&](std::uint32_t c) { out.push_back(marked_list_[c]); });
  return out;
}

std::vector<PairReport> BpiStructure::pairfind_query(const GridCell& cell, QueryCounters& ctr) const {
  if (planar_ || !marked_.count(cell)) throw UsageError("pairfind: cell is not marked");
  std::vector<PairReport> out;
  pairfind_->query(cell, ctr, [&](std::uint32_t a, std::uint32_t b) {
    out.push_back(PairReport::make(boxes_[a].id, boxes_[b].id, Tag::HdCase1));
  });
  return out;
}

std::vector<std::uint32_t> BpiStructure::boxint_query(const Box& q, QueryCounters& ctr) const {
  std::vector<std::uint32_t> ids;
  if (planar_) {
    for (auto i : planar_->recint().report(q, ctr)) ids.push_back(boxes_[i].id);
  } else {
    for (auto i : boxint_->report(q, ctr)) ids.push_back(boxes_[i].id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<PairReport> BpiStructure::query(const Box& q, QueryCounters& ctr) const {
  if (q.dim != dim_ || !q.valid()) throw UsageError("bpi query: expected a valid box of dimension " + std::to_string(dim_));
  if (planar_) return planar_->query(q, ctr);
  std::vector<PairReport> out;
  std::unordered_set<std::uint64_t> seen;
  auto emit = [&](std::uint32_t a, std::uint32_t b, Tag t) {
    if (a == b) return;
    ++ctr.candidates;
    if (!triple_intersects(boxes_[a], boxes_[b], q)) return;
    if (!seen.insert(pair_key(boxes_[a].id, boxes_[b].id)).second) return;
    ++ctr.reported;
    out.push_back(PairReport::make(boxes_[a].id, boxes_[b].id, t));
  };

  // Case 1: canonical cell of the intersection inside q.
  for (const auto& cell : gridcont_query(q, ctr))
    pairfind_->query(cell, ctr, [&](std::uint32_t a, std::uint32_t b) { emit(a, b, Tag::HdCase1); });

  // Case 2: the intersection meets a cell on q's boundary.
  for (int t = 0; t < static_cast<int>(children_.size()); ++t) {
    const GridAxis& ax = grid_.axis(t);
    std::int32_t ks[2] = {ax.interval_of(q.lo[t]), ax.interval_of(q.hi[t])};
    for (int w = 0; w < 2; ++w) {
      if (w == 1 && ks[1] == ks[0]) break;
      const Child& ch = children_[t][ks[w]];
      for (auto s : ch.partial) {
        ++ctr.list_steps;
        if (!boxes_[s].intersects(q)) continue;
        for (auto p : boxint_->report(clip(boxes_[s], q), ctr)) emit(s, p, Tag::HdCase2);
      }
      for (std::size_t a = 0; a < ch.scanned.size(); ++a)
        for (std::size_t b = a + 1; b < ch.scanned.size(); ++b) emit(ch.scanned[a], ch.scanned[b], Tag::HdCase2);
      if (ch.bpi && !(w == 1 && ch.bpi == children_[t][ks[0]].bpi)) {
        QueryCounters sub;
        for (const auto& r : ch.bpi->query(q.drop_axis(t), sub))
          emit(index_of_.at(r.i), index_of_.at(r.j), Tag::HdCase2);
        sub.reported = 0;
        ctr += sub;
      }
    }
  }
  return out;
}

BpiStats BpiStructure::stats() const {
  std::unordered_set<const BpiStructure*> counted;
  return stats(counted);
}

BpiStats BpiStructure::stats(std::unordered_set<const BpiStructure*>& counted) const {
  BpiStats s;
  s.dim = dim_;
  s.n = boxes_.size();
  if (planar_) {
    s.planar = planar_->stats();
    s.stored_cells = s.planar.stored_cells;
    return s;
  }
  s.step = grid_step(boxes_.size(), delta_);
  s.marked_cells = marked_.size();
  s.max_slab_facets = max_slab_facets_;
  s.stored_cells = boxes_.size() + gridcont_.stored_cells() + boxint_->stored_cells() + pairfind_->stored_cells();
  for (int t = 0; t < static_cast<int>(children_.size()); ++t) s.stored_cells += grid_.axis(t).chosen.size();
  for (const auto& axis : children_)
    for (const auto& ch : axis) {
      s.stored_cells += ch.partial.size() + ch.scanned.size();
      if (!ch.bpi || !counted.insert(ch.bpi.get()).second) continue;
      const BpiStats cs = ch.bpi->stats(counted);
      s.children += 1 + cs.children;
      s.stored_cells += cs.stored_cells;
      s.max_slab_facets = std::max(s.max_slab_facets, cs.max_slab_facets);
    }
  return s;
}

}  // namespace bpi
