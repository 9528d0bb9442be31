#include "bpi/planar.hpp"

#include <algorithm>

namespace bpi {

namespace {

std::array<std::array<Scalar, 2>, 4> corners(const Box& q) {
  return {{{q.lo[0], q.lo[1]}, {q.hi[0], q.lo[1]}, {q.lo[0], q.hi[1]}, {q.hi[0], q.hi[1]}}};
}

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

// ---------------------------------------------------------------- stretches

std::vector<Stretch> compute_stretches(std::span<const Box> rects, const RectIntersectIndex& recint) {
  std::vector<Stretch> out;
  QueryCounters scratch;
  for (std::uint32_t i = 0; i < rects.size(); ++i) {
    const Box& r = rects[i];
    for (Side side : {Side::Bottom, Side::Top, Side::Left, Side::Right}) {
      const bool vertical = is_vertical(side);
      const int along = vertical ? 1 : 0;
      Stretch s;
      s.owner = i;
      s.side = side;
      s.fixed = side == Side::Bottom ? r.lo[1] : side == Side::Top ? r.hi[1] : side == Side::Left ? r.lo[0] : r.hi[0];
      Box seg = r;
      seg.lo[1 - along] = seg.hi[1 - along] = s.fixed;
      s.lo = kPosInf;
      s.hi = kNegInf;
      for (auto j : recint.report(seg, scratch)) {
        if (j == i) continue;
        s.lo = std::min(s.lo, std::max(r.lo[along], rects[j].lo[along]));
        s.hi = std::max(s.hi, std::min(r.hi[along], rects[j].hi[along]));
      }
      if (s.lo <= s.hi) out.push_back(s);
    }
  }
  return out;
}

// ---------------------------------------------------------------- C5 index

C5Index::C5Index(std::span<const Box> rects, int axis) : axis_(axis) {
  if (axis != 0 && axis != 1) throw UsageError("c5: axis must be 0 or 1");
  rects_.reserve(rects.size());
  for (const Box& b : rects) rects_.push_back(local(b));
  if (rects_.empty()) return;

  std::vector<Scalar> xs;
  for (const Box& b : rects_) {
    xs.push_back(b.lo[0]);
    xs.push_back(b.hi[0]);
  }
  line_ = PieceLine(std::move(xs));
  tree_ = SlabTree(line_.piece_count());
  sets_.resize(tree_.size());

  std::vector<std::int32_t> buf;
  for (std::uint32_t r = 0; r < rects_.size(); ++r) {
    const std::int32_t a = line_.piece(rects_[r].lo[0]);
    const std::int32_t b = line_.piece(rects_[r].hi[0]);
    piece_lo_.push_back(a);
    piece_hi_.push_back(b);
    buf.clear();
    tree_.canonical(a + 1, b - 1, buf);
    for (auto v : buf) sets_[v].cross.push_back(r);
    buf.clear();
    tree_.path(a, buf);
    for (auto v : buf)
      if (!tree_.node(v).leaf()) sets_[v].side.push_back(r);
    if (b != a) {
      buf.clear();
      tree_.path(b, buf);
      for (auto v : buf) {
        const auto& nd = tree_.node(v);
        if (!nd.leaf() && !(nd.lo <= a && a <= nd.hi)) sets_[v].side.push_back(r);
      }
    }
  }
  for (const auto& s : sets_) membership_ += s.cross.size() + s.side.size();

  lists_.resize(tree_.size());
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(tree_.size()); ++v)
    if (!sets_[v].cross.empty()) build_node(v);
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(tree_.size()); ++v) {
    if (sets_[v].cross.empty()) continue;
    for (auto r : sets_[v].cross) add_trimmed(v, r, true);
    for (auto r : sets_[v].side) add_trimmed(v, r, false);
  }

  std::vector<PersistentActiveList::Item> items;
  items.reserve(sides_.size());
  for (std::uint32_t s = 0; s < sides_.size(); ++s) {
    const TrimmedSide& ts = sides_[s];
    items.push_back({ts.top ? ts.hi : ts.lo, rects_[ts.rect].id, side_piece_lo_[s], side_piece_hi_[s], s});
  }
  catalog_ = std::make_unique<PersistentActiveList>(std::move(items), false, true);
}

void C5Index::build_node(std::int32_t v) {
  NodeLists& L = lists_[v];
  const auto& cross = sets_[v].cross;
  L.tops = cross;
  L.bottoms = cross;
  std::sort(L.tops.begin(), L.tops.end(), [&](auto a, auto b) {
    return rects_[a].hi[1] != rects_[b].hi[1] ? rects_[a].hi[1] < rects_[b].hi[1] : rects_[a].id < rects_[b].id;
  });
  std::sort(L.bottoms.begin(), L.bottoms.end(), [&](auto a, auto b) {
    return rects_[a].lo[1] != rects_[b].lo[1] ? rects_[a].lo[1] < rects_[b].lo[1] : rects_[a].id < rects_[b].id;
  });
  for (auto r : L.tops) L.top_keys.push_back(rects_[r].hi[1]);
  for (auto r : L.bottoms) L.bottom_keys.push_back(rects_[r].lo[1]);
  std::vector<PersistentActiveList::Item> items;
  items.reserve(cross.size());
  for (auto r : cross) items.push_back({rects_[r].id, rects_[r].id, rects_[r].lo[1], rects_[r].hi[1], r});
  L.cover = PersistentActiveList(std::move(items));
}

void C5Index::add_trimmed(std::int32_t v, std::uint32_t r, bool in_cross) {
  const NodeLists& L = lists_[v];
  const Box& s = rects_[r];
  // Some crossSet member other than r contains height y.
  auto covered = [&](Scalar y) {
    for (auto c = L.cover.at(y); c; c.advance())
      if (c.payload() != r) return true;
    return false;
  };
  Scalar top, bottom;
  if (covered(s.hi[1])) {
    top = s.hi[1];
  } else {
    const auto k = std::lower_bound(L.top_keys.begin(), L.top_keys.end(), s.hi[1]) - L.top_keys.begin() - 1;
    if (k < 0 || L.top_keys[k] < s.lo[1]) return;
    top = L.top_keys[k];
  }
  if (covered(s.lo[1])) {
    bottom = s.lo[1];
  } else {
    const auto k = std::upper_bound(L.bottom_keys.begin(), L.bottom_keys.end(), s.lo[1]) - L.bottom_keys.begin();
    if (k == static_cast<std::ptrdiff_t>(L.bottom_keys.size()) || L.bottom_keys[k] > s.hi[1]) return;
    bottom = L.bottom_keys[k];
  }
  const auto& nd = tree_.node(v);
  const std::int32_t x_lo = in_cross ? nd.lo : std::max(piece_lo_[r], nd.lo);
  const std::int32_t x_hi = in_cross ? nd.hi : std::min(piece_hi_[r], nd.hi);

  auto lb = [](const std::vector<Scalar>& keys, Scalar y) {
    return static_cast<std::int32_t>(std::lower_bound(keys.begin(), keys.end(), y) - keys.begin());
  };
  auto ub = [](const std::vector<Scalar>& keys, Scalar y) {
    return static_cast<std::int32_t>(std::upper_bound(keys.begin(), keys.end(), y) - keys.begin());
  };
  sides_.push_back({v, r, false, bottom, top, lb(L.top_keys, bottom), lb(L.bottom_keys, bottom), L.cover.at(bottom)});
  side_piece_lo_.push_back(x_lo);
  side_piece_hi_.push_back(x_hi);
  if (top != bottom) {
    sides_.push_back({v, r, true, bottom, top, ub(L.top_keys, top) - 1, ub(L.bottom_keys, top) - 1, L.cover.at(top)});
    side_piece_lo_.push_back(x_lo);
    side_piece_hi_.push_back(x_hi);
  }
}

std::vector<std::uint32_t> C5Index::crossed_sides(const Box& q, QueryCounters& ctr) const {
  std::vector<std::uint32_t> out;
  if (!catalog_) return out;
  const Box ql = local(q);
  for (auto c = catalog_->seek(line_.piece(ql.lo[0]), ql.lo[1], &ctr); c && c.key() <= ql.hi[1]; c.advance()) {
    ++ctr.list_steps;
    out.push_back(c.payload());
  }
  return out;
}

std::vector<std::pair<std::int32_t, std::uint32_t>> C5Index::find_canonical_nodes(const Box& q,
                                                                                  QueryCounters& ctr) const {
  std::vector<std::pair<std::int32_t, std::uint32_t>> out;
  for (auto s : crossed_sides(q, ctr)) out.emplace_back(sides_[s].node, sides_[s].rect);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void C5Index::enumerate_partners(std::uint32_t side, const Box& q, QueryCounters& ctr,
                                 std::vector<std::uint32_t>& out) const {
  const TrimmedSide& ts = sides_[side];
  const NodeLists& L = lists_[ts.node];
  const Box ql = local(q);
  ++ctr.nodes_visited;
  auto push = [&](std::uint32_t i) {
    if (i != ts.rect) out.push_back(i);
  };
  const auto n_top = static_cast<std::int32_t>(L.tops.size());
  const auto n_bottom = static_cast<std::int32_t>(L.bottoms.size());
  if (!ts.top) {
    const Scalar j_lo = ts.lo, j_hi = std::min(ts.hi, ql.hi[1]);
    // tops inside J
    for (auto k = ts.top_start; k < n_top && L.top_keys[k] <= j_hi; ++k) {
      ++ctr.list_steps;
      push(L.tops[k]);
    }
    // bottoms inside J whose top lies above J
    for (auto k = ts.bottom_start; k < n_bottom && L.bottom_keys[k] <= j_hi; ++k) {
      ++ctr.list_steps;
      if (rects_[L.bottoms[k]].hi[1] > j_hi) push(L.bottoms[k]);
    }
    // members spanning J
    for (auto c = ts.cover; c; c.advance()) {
      ++ctr.list_steps;
      const Box& b = rects_[c.payload()];
      if (b.lo[1] < j_lo && b.hi[1] > j_hi) push(c.payload());
    }
  } else {
    const Scalar j_lo = std::max(ts.lo, ql.lo[1]), j_hi = ts.hi;
    for (auto k = ts.bottom_start; k >= 0 && L.bottom_keys[k] >= j_lo; --k) {
      ++ctr.list_steps;
      push(L.bottoms[k]);
    }
    for (auto k = ts.top_start; k >= 0 && L.top_keys[k] >= j_lo; --k) {
      ++ctr.list_steps;
      if (rects_[L.tops[k]].lo[1] < j_lo) push(L.tops[k]);
    }
    for (auto c = ts.cover; c; c.advance()) {
      ++ctr.list_steps;
      const Box& b = rects_[c.payload()];
      if (b.lo[1] < j_lo && b.hi[1] > j_hi) push(c.payload());
    }
  }
}

std::size_t C5Index::stored_cells() const {
  std::size_t c = tree_.size() + membership_ + sides_.size() * 3;
  for (const auto& L : lists_) c += 2 * (L.tops.size() + L.bottoms.size()) + L.cover.stored_cells();
  if (catalog_) c += catalog_->stored_cells();
  return c;
}

// ---------------------------------------------------------------- planar

class PlanarStructure::Emitter {
 public:
  Emitter(const PlanarStructure& ps, const Box& q, Tag tag, QueryCounters& ctr) : ps_(ps), q_(q), tag_(tag), ctr_(ctr) {}

  void operator()(std::uint32_t i, std::uint32_t j) {
    if (i == j) return;
    ++ctr_.candidates;
    const Box& a = ps_.rects_[i];
    const Box& b = ps_.rects_[j];
    if (!triple_intersects(a, b, q_)) return;
    const auto t = dedup_tag(a, b, ps_.stretches_of(i), ps_.stretches_of(j), q_);
    if (t != tag_) return;
    if (!seen_.insert(pair_key(a.id, b.id)).second) return;
    ++ctr_.reported;
    out_.push_back(PairReport::make(a.id, b.id, tag_));
  }

  std::vector<PairReport> take() { return std::move(out_); }

 private:
  const PlanarStructure& ps_;
  const Box& q_;
  Tag tag_;
  QueryCounters& ctr_;
  std::unordered_set<std::uint64_t> seen_;
  std::vector<PairReport> out_;
};

PlanarStructure::PlanarStructure(std::vector<Box> rects) : rects_(std::move(rects)) {
  for (const Box& b : rects_)
    if (b.dim != 2 || !b.valid()) throw UsageError("planar: expected valid rectangles, got " + to_string(b));
  ptenc_ = StabbingStructure(rects_);
  recint_ = RectIntersectIndex(rects_, &ptenc_);
  stretches_ = compute_stretches(rects_, recint_);
  stretch_begin_.assign(rects_.size() + 1, 0);
  for (const Stretch& s : stretches_) ++stretch_begin_[s.owner + 1];
  for (std::size_t i = 0; i < rects_.size(); ++i) stretch_begin_[i + 1] += stretch_begin_[i];

  std::vector<std::array<Scalar, 2>> endpoints;
  endpoints.reserve(2 * stretches_.size());
  for (const Stretch& s : stretches_) {
    endpoints.push_back(s.endpoint(0));
    endpoints.push_back(s.endpoint(1));
  }
  eptenc_ = EndpointEntryTable(ptenc_, endpoints);
  recenc_ = EndpointRangeStructure(stretches_);
  reccross_ = CrossingStructure(stretches_);
  segint_ = SideWalker(rects_, stretches_);
  c5x_ = C5Index(rects_, 0);
  c5y_ = C5Index(rects_, 1);
}

std::vector<PairReport> PlanarStructure::report_c1(const Box& q, QueryCounters& ctr) const {
  Emitter emit(*this, q, Tag::C1, ctr);
  std::vector<std::uint32_t> all;
  bool first = true;
  for (const auto& c : corners(q)) {
    auto set = ptenc_.report(c, ctr);
    sort_unique(set);
    if (first) {
      all = std::move(set);
      first = false;
    } else {
      std::vector<std::uint32_t> both;
      std::set_intersection(all.begin(), all.end(), set.begin(), set.end(), std::back_inserter(both));
      all = std::move(both);
    }
    if (all.empty()) return {};
  }
  const auto hits = recint_.report(q, ctr);
  for (auto i : all)
    for (auto j : hits) emit(i, j);
  return emit.take();
}

std::vector<PairReport> PlanarStructure::report_c2(const Box& q, QueryCounters& ctr) const {
  Emitter emit(*this, q, Tag::C2, ctr);
  for (auto e : recenc_.report(q, ctr)) {
    const std::uint32_t s = e / 2;
    const std::uint32_t owner = stretches_[s].owner;
    for (auto p : eptenc_.enumerate(e, ctr)) emit(owner, p);
    segint_.walk(s, static_cast<int>(e % 2), q, ctr, [&](std::uint32_t p) { emit(owner, p); });
  }
  return emit.take();
}

std::vector<PairReport> PlanarStructure::report_c3(const Box& q, QueryCounters& ctr) const {
  Emitter emit(*this, q, Tag::C3, ctr);
  if (!reccross_.any(q, true, ctr) || !reccross_.any(q, false, ctr)) return {};
  auto owners = [&](bool vertical) {
    auto ids = reccross_.report(q, vertical, ctr);
    for (auto& s : ids) s = stretches_[s].owner;
    sort_unique(ids);
    return ids;
  };
  const auto vs = owners(true);
  const auto hs = owners(false);
  for (auto i : vs)
    for (auto j : hs) emit(i, j);
  return emit.take();
}

std::vector<PairReport> PlanarStructure::report_c4(const Box& q, QueryCounters& ctr) const {
  Emitter emit(*this, q, Tag::C4, ctr);
  for (const auto& c : corners(q)) {
    if (!ptenc_.any(c, ctr)) continue;
    const auto set = ptenc_.report(c, ctr);
    for (std::size_t a = 0; a < set.size(); ++a)
      for (std::size_t b = a + 1; b < set.size(); ++b) emit(set[a], set[b]);
  }
  return emit.take();
}

std::vector<PairReport> PlanarStructure::report_c5(const Box& q, QueryCounters& ctr) const {
  Emitter emit(*this, q, Tag::C5, ctr);
  c5x_.report(q, ctr, emit);
  c5y_.report(q, ctr, emit);
  return emit.take();
}

std::vector<PairReport> PlanarStructure::query(const Box& q, QueryCounters& ctr) const {
  if (q.dim != 2 || !q.valid()) throw UsageError("planar query: expected a valid rectangle, got " + to_string(q));
  std::vector<PairReport> out;
  for (auto routine : {&PlanarStructure::report_c1, &PlanarStructure::report_c2, &PlanarStructure::report_c3,
                        &PlanarStructure::report_c4, &PlanarStructure::report_c5}) {
    auto part = (this->*routine)(q, ctr);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

PlanarStats PlanarStructure::stats() const {
  PlanarStats s;
  s.n = rects_.size();
  s.stretches = stretches_.size();
  s.membership_x = c5x_.membership_size();
  s.membership_y = c5y_.membership_size();
  s.catalog_x = c5x_.sides().size();
  s.catalog_y = c5y_.sides().size();
  s.stored_cells = ptenc_.stored_cells() + recint_.stored_cells() + 5 * stretches_.size() + eptenc_.entry_count() +
                   recenc_.stored_cells() + reccross_.stored_cells() + segint_.stored_cells() + c5x_.stored_cells() +
                   c5y_.stored_cells();
  return s;
}

}  // namespace bpi
