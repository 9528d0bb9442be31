#include "bpi/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace bpi {

Box::Box(std::uint32_t id_, std::span<const Scalar> lo_, std::span<const Scalar> hi_) : id(id_) {
  if (lo_.size() != hi_.size()) throw UsageError("box: lo/hi dimension mismatch");
  if (lo_.size() > static_cast<std::size_t>(kMaxDim)) throw UsageError("box: dimension too large");
  dim = static_cast<int>(lo_.size());
  std::copy(lo_.begin(), lo_.end(), lo.begin());
  std::copy(hi_.begin(), hi_.end(), hi.begin());
}

Box Box::make2(std::uint32_t id, Scalar x0, Scalar x1, Scalar y0, Scalar y1) {
  Box b;
  b.id = id;
  b.dim = 2;
  b.lo[0] = x0;
  b.hi[0] = x1;
  b.lo[1] = y0;
  b.hi[1] = y1;
  return b;
}

bool Box::valid() const {
  for (int t = 0; t < dim; ++t)
    if (lo[t] > hi[t]) return false;
  return true;
}

bool Box::contains_point(std::span<const Scalar> p) const {
  for (int t = 0; t < dim; ++t)
    if (p[t] < lo[t] || p[t] > hi[t]) return false;
  return true;
}

bool Box::contains(const Box& o) const {
  for (int t = 0; t < dim; ++t)
    if (o.lo[t] < lo[t] || o.hi[t] > hi[t]) return false;
  return true;
}

bool Box::intersects(const Box& o) const {
  for (int t = 0; t < dim; ++t)
    if (std::max(lo[t], o.lo[t]) > std::min(hi[t], o.hi[t])) return false;
  return true;
}

Box Box::drop_axis(int t) const {
  Box r;
  r.id = id;
  r.dim = dim - 1;
  for (int s = 0, k = 0; s < dim; ++s) {
    if (s == t) continue;
    r.lo[k] = lo[s];
    r.hi[k] = hi[s];
    ++k;
  }
  return r;
}

Box Box::transposed() const {
  Box r = *this;
  std::swap(r.lo[0], r.lo[1]);
  std::swap(r.hi[0], r.hi[1]);
  return r;
}

bool operator==(const Box& a, const Box& b) {
  if (a.id != b.id || a.dim != b.dim) return false;
  for (int t = 0; t < a.dim; ++t)
    if (a.lo[t] != b.lo[t] || a.hi[t] != b.hi[t]) return false;
  return true;
}

std::string to_string(const Box& b) {
  std::ostringstream os;
  os << '#' << b.id << ' ';
  for (int t = 0; t < b.dim; ++t) {
    if (t) os << 'x';
    os << '[' << b.lo[t] << ',' << b.hi[t] << ']';
  }
  return os.str();
}

std::optional<Box> intersect_boxes(const Box& a, const Box& b) {
  if (a.dim != b.dim) throw UsageError("intersect_boxes: dimension mismatch");
  Box r;
  r.dim = a.dim;
  for (int t = 0; t < a.dim; ++t) {
    r.lo[t] = std::max(a.lo[t], b.lo[t]);
    r.hi[t] = std::min(a.hi[t], b.hi[t]);
    if (r.lo[t] > r.hi[t]) return std::nullopt;
  }
  return r;
}

bool triple_intersects(const Box& a, const Box& b, const Box& q) {
  if (a.dim != b.dim || a.dim != q.dim) throw UsageError("triple_intersects: dimension mismatch");
  for (int t = 0; t < a.dim; ++t) {
    if (std::max({a.lo[t], b.lo[t], q.lo[t]}) > std::min({a.hi[t], b.hi[t], q.hi[t]})) return false;
  }
  return true;
}

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::C1: return "C1";
    case Tag::C2: return "C2";
    case Tag::C3: return "C3";
    case Tag::C4: return "C4";
    case Tag::C5: return "C5";
    case Tag::HdCase1: return "HD_CASE1";
    case Tag::HdCase2: return "HD_CASE2";
  }
  return "?";
}

std::array<Scalar, 2> Stretch::endpoint(int which) const {
  const Scalar along = which == 0 ? lo : hi;
  return vertical() ? std::array<Scalar, 2>{fixed, along} : std::array<Scalar, 2>{along, fixed};
}

Box Stretch::as_box() const {
  return vertical() ? Box::make2(0, fixed, fixed, lo, hi) : Box::make2(0, lo, hi, fixed, fixed);
}

bool Stretch::crosses(const Box& q) const {
  if (vertical()) return q.lo[0] <= fixed && fixed <= q.hi[0] && lo <= q.lo[1] && hi >= q.hi[1];
  return q.lo[1] <= fixed && fixed <= q.hi[1] && lo <= q.lo[0] && hi >= q.hi[0];
}

namespace {

bool c2_from(std::span<const Stretch> own, const Box& other, const Box& q) {
  for (const Stretch& s : own) {
    const auto e0 = s.endpoint(0);
    const auto e1 = s.endpoint(1);
    if (!q.contains_point(e0) && !q.contains_point(e1)) continue;
    if (triple_intersects(s.as_box(), other, q)) return true;
  }
  return false;
}

bool c3_from(std::span<const Stretch> vert_src, std::span<const Stretch> horz_src, const Box& q) {
  bool v = false, h = false;
  for (const Stretch& s : vert_src) v = v || (s.vertical() && s.crosses(q));
  if (!v) return false;
  for (const Stretch& s : horz_src) h = h || (!s.vertical() && s.crosses(q));
  return h;
}

bool covers(Scalar outer_lo, Scalar outer_hi, Scalar lo, Scalar hi) { return outer_lo <= lo && hi <= outer_hi; }

}  // namespace

ConfigSet config_membership(const Box& si, const Box& sj, std::span<const Stretch> stretches_i,
                            std::span<const Stretch> stretches_j, const Box& q) {
  if (si.dim != 2 || sj.dim != 2 || q.dim != 2) throw UsageError("config_membership: planar boxes only");
  const auto inter = intersect_boxes(si, sj);
  if (!inter || !inter->intersects(q)) throw UsageError("config_membership: triple does not intersect");
  const Box& I = *inter;

  ConfigSet s = 0;
  if (si.contains(q) || sj.contains(q)) s |= 1U << 0;
  if (c2_from(stretches_i, sj, q) || c2_from(stretches_j, si, q)) s |= 1U << 1;
  if (c3_from(stretches_i, stretches_j, q) || c3_from(stretches_j, stretches_i, q)) s |= 1U << 2;
  for (int c = 0; c < 4; ++c) {
    const std::array<Scalar, 2> corner{c & 1 ? q.hi[0] : q.lo[0], c & 2 ? q.hi[1] : q.lo[1]};
    if (I.contains_point(corner)) {
      s |= 1U << 3;
      break;
    }
  }
  const bool cross_a = covers(I.lo[0], I.hi[0], q.lo[0], q.hi[0]) && covers(q.lo[1], q.hi[1], I.lo[1], I.hi[1]);
  const bool cross_b = covers(q.lo[0], q.hi[0], I.lo[0], I.hi[0]) && covers(I.lo[1], I.hi[1], q.lo[1], q.hi[1]);
  if (cross_a || cross_b) s |= 1U << 4;
  return s;
}

std::optional<Tag> dedup_tag(ConfigSet membership) {
  for (int m = 0; m < 5; ++m)
    if ((membership >> m) & 1U) return static_cast<Tag>(m);
  return std::nullopt;
}

std::optional<Tag> dedup_tag(const Box& si, const Box& sj, std::span<const Stretch> stretches_i,
                             std::span<const Stretch> stretches_j, const Box& q) {
  return dedup_tag(config_membership(si, sj, stretches_i, stretches_j, q));
}

}  // namespace bpi
