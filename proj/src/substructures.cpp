#include "bpi/substructures.hpp"

#include <algorithm>

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

}  // namespace

// ---------------------------------------------------------------- PtEnc

StabbingStructure::StabbingStructure(std::span<const Box> rects) {
  for (const Box& b : rects)
    if (b.dim != 2) throw UsageError("ptenc: rectangles must be planar");
  const auto payloads = iota_payloads(rects.size());
  index_ = EnclosureIndex(rects, payloads);
}

std::vector<std::uint32_t> StabbingStructure::report(std::array<Scalar, 2> p, QueryCounters& ctr) const {
  std::vector<std::uint32_t> out;
  index_.report(p, ctr, [&](std::uint32_t i) { out.push_back(i); });
  return out;
}

bool StabbingStructure::any(std::array<Scalar, 2> p, QueryCounters& ctr) const { return index_.any(p, ctr); }

// ---------------------------------------------------------------- EPtEnc

EndpointEntryTable::EndpointEntryTable(const StabbingStructure& ptenc,
                                       std::span<const std::array<Scalar, 2>> points) {
  offsets_.reserve(points.size() + 1);
  offsets_.push_back(0);
  for (const auto& p : points) {
    auto cs = ptenc.index().entries(p);
    cursors_.insert(cursors_.end(), cs.begin(), cs.end());
    offsets_.push_back(static_cast<std::uint32_t>(cursors_.size()));
  }
}

std::vector<std::uint32_t> EndpointEntryTable::enumerate(std::uint32_t point_id, QueryCounters& ctr) const {
  std::vector<std::uint32_t> out;
  for (auto k = offsets_[point_id]; k < offsets_[point_id + 1]; ++k) {
    ++ctr.nodes_visited;
    for (auto c = cursors_[k]; c; c.advance()) {
      ++ctr.list_steps;
      out.push_back(c.payload());
    }
  }
  return out;
}

// ---------------------------------------------------------------- segments

SegmentCrossIndex::SegmentCrossIndex(std::vector<Segment> segments) : count_(segments.size()) {
  std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    return a.fixed != b.fixed ? a.fixed < b.fixed : a.payload < b.payload;
  });
  nodes_.reserve(2 * segments.size());
  root_ = build(segments, 0, static_cast<std::int32_t>(segments.size()));
}

std::int32_t SegmentCrossIndex::build(std::vector<Segment>& segs, std::int32_t b, std::int32_t e) {
  if (b >= e) return -1;
  std::vector<PrioritySearchTree::Point> pts;
  pts.reserve(e - b);
  for (auto i = b; i < e; ++i) pts.push_back({segs[i].lo, segs[i].hi, segs[i].payload});
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{segs[b].fixed, segs[e - 1].fixed, -1, -1, PrioritySearchTree(std::move(pts))});
  if (e - b == 1) return id;
  const std::int32_t m = b + (e - b) / 2;
  const std::int32_t l = build(segs, b, m);
  const std::int32_t r = build(segs, m, e);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void SegmentCrossIndex::canonical(Scalar a, Scalar b, std::vector<std::int32_t>& out, QueryCounters& ctr) const {
  if (root_ < 0 || a > b) return;
  std::vector<std::int32_t> stack{root_};
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    ++ctr.nodes_visited;
    const Node& nd = nodes_[id];
    if (nd.fixed_max < a || nd.fixed_min > b) continue;
    if (a <= nd.fixed_min && nd.fixed_max <= b) {
      out.push_back(id);
      continue;
    }
    if (nd.left >= 0) stack.push_back(nd.left);
    if (nd.right >= 0) stack.push_back(nd.right);
  }
}

bool SegmentCrossIndex::any(Scalar a, Scalar b, Scalar c, Scalar d, QueryCounters& ctr) const {
  std::vector<std::int32_t> canon;
  canonical(a, b, canon, ctr);
  for (auto v : canon)
    if (nodes_[v].pst.any(kNegInf, c, d, ctr)) return true;
  return false;
}

std::size_t SegmentCrossIndex::stored_cells() const {
  std::size_t c = nodes_.size();
  for (const auto& nd : nodes_) c += nd.pst.size();
  return c;
}

// ---------------------------------------------------------------- RecCross

CrossingStructure::CrossingStructure(std::span<const Stretch> stretches) {
  std::vector<SegmentCrossIndex::Segment> v, h;
  for (std::uint32_t i = 0; i < stretches.size(); ++i) {
    const Stretch& s = stretches[i];
    (s.vertical() ? v : h).push_back({s.fixed, s.lo, s.hi, i});
  }
  vertical_ = SegmentCrossIndex(std::move(v));
  horizontal_ = SegmentCrossIndex(std::move(h));
}

std::vector<std::uint32_t> CrossingStructure::report(const Box& q, bool vertical, QueryCounters& ctr) const {
  std::vector<std::uint32_t> out;
  auto push = [&](std::uint32_t s) { out.push_back(s); };
  if (vertical)
    vertical_.report(q.lo[0], q.hi[0], q.lo[1], q.hi[1], ctr, push);
  else
    horizontal_.report(q.lo[1], q.hi[1], q.lo[0], q.hi[0], ctr, push);
  return out;
}

bool CrossingStructure::any(const Box& q, bool vertical, QueryCounters& ctr) const {
  return vertical ? vertical_.any(q.lo[0], q.hi[0], q.lo[1], q.hi[1], ctr)
                  : horizontal_.any(q.lo[1], q.hi[1], q.lo[0], q.hi[0], ctr);
}

// ---------------------------------------------------------------- RecEnc

EndpointRangeStructure::EndpointRangeStructure(std::span<const Stretch> stretches) {
  std::vector<Scalar> coords;
  std::vector<std::uint32_t> payloads;
  coords.reserve(4 * stretches.size());
  for (std::uint32_t i = 0; i < stretches.size(); ++i) {
    for (int w = 0; w < 2; ++w) {
      const auto p = stretches[i].endpoint(w);
      coords.push_back(p[0]);
      coords.push_back(p[1]);
      payloads.push_back(2 * i + w);
    }
  }
  tree_ = RangeTree(2, std::move(coords), std::move(payloads));
}

std::vector<std::uint32_t> EndpointRangeStructure::report(const Box& q, QueryCounters& ctr) const {
  std::vector<std::uint32_t> out;
  tree_.report(std::span<const Scalar>(q.lo.data(), 2), std::span<const Scalar>(q.hi.data(), 2), ctr,
               [&](std::uint32_t e) { out.push_back(e); });
  return out;
}

// ---------------------------------------------------------------- SegInt

SideWalker::SideWalker(std::span<const Box> rects, std::span<const Stretch> stretches)
    : stretches_(stretches.begin(), stretches.end()) {
  std::vector<PersistentActiveList::Item> h, v;
  for (std::uint32_t i = 0; i < rects.size(); ++i) {
    const Box& r = rects[i];
    h.push_back({r.lo[1], r.id, r.lo[0], r.hi[0], i});
    if (r.hi[1] != r.lo[1]) h.push_back({r.hi[1], r.id, r.lo[0], r.hi[0], i});
    v.push_back({r.lo[0], r.id, r.lo[1], r.hi[1], i});
    if (r.hi[0] != r.lo[0]) v.push_back({r.hi[0], r.id, r.lo[1], r.hi[1], i});
  }
  lists_[0] = std::make_unique<PersistentActiveList>(h, false, true);
  lists_[1] = std::make_unique<PersistentActiveList>(h, true, true);
  lists_[2] = std::make_unique<PersistentActiveList>(v, false, true);
  lists_[3] = std::make_unique<PersistentActiveList>(v, true, true);
  entries_.reserve(2 * stretches_.size());
  for (const Stretch& s : stretches_) {
    const int base = s.vertical() ? 0 : 2;
    entries_.push_back(lists_[base]->seek(s.fixed, s.lo));
    entries_.push_back(lists_[base + 1]->seek(s.fixed, s.hi));
  }
}

std::size_t SideWalker::stored_cells() const {
  std::size_t c = entries_.size();
  for (const auto& l : lists_)
    if (l) c += l->stored_cells();
  return c;
}

// ---------------------------------------------------------------- RecInt

RectIntersectIndex::RectIntersectIndex(std::span<const Box> rects, const StabbingStructure* ptenc) : ptenc_(ptenc) {
  std::vector<SegmentCrossIndex::Segment> v, h;
  for (std::uint32_t i = 0; i < rects.size(); ++i) {
    const Box& r = rects[i];
    if (r.dim != 2) throw UsageError("recint: rectangles must be planar");
    v.push_back({r.lo[0], r.lo[1], r.hi[1], i});
    v.push_back({r.hi[0], r.lo[1], r.hi[1], i});
    h.push_back({r.lo[1], r.lo[0], r.hi[0], i});
    h.push_back({r.hi[1], r.lo[0], r.hi[0], i});
  }
  vertical_sides_ = SegmentCrossIndex(std::move(v));
  horizontal_sides_ = SegmentCrossIndex(std::move(h));
}

std::vector<std::uint32_t> RectIntersectIndex::report(const Box& q, QueryCounters& ctr) const {
  std::vector<std::uint32_t> out;
  auto push = [&](std::uint32_t i) { out.push_back(i); };
  // A side meets q: its fixed coordinate lies in q's range and its extent
  // overlaps q's range on the other axis.
  vertical_sides_.report(q.lo[0], q.hi[0], q.hi[1], q.lo[1], ctr, push);
  horizontal_sides_.report(q.lo[1], q.hi[1], q.hi[0], q.lo[0], ctr, push);
  if (ptenc_) ptenc_->index().report(std::span<const Scalar>(q.lo.data(), 2), ctr, push);
  sort_unique(out);
  return out;
}

std::size_t RectIntersectIndex::stored_cells() const {
  return vertical_sides_.stored_cells() + horizontal_sides_.stored_cells();
}

}  // namespace bpi
