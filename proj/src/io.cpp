#include "bpi/io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

namespace bpi {

namespace {

using Json = nlohmann::ordered_json;

Json coords(const Box& b, bool upper) {
  Json a = Json::array();
  for (int t = 0; t < b.dim; ++t) a.push_back(upper ? b.hi[t] : b.lo[t]);
  return a;
}

Json box_record(const char* key, const Box& b) {
  Json r;
  r[key] = b.id;
  r["lo"] = coords(b, false);
  r["hi"] = coords(b, true);
  return r;
}

Json stats_object(const BpiStats& s) {
  Json j;
  j["dim"] = s.dim;
  j["n"] = s.n;
  j["stored_cells"] = s.stored_cells;
  if (s.dim == 2) {
    j["stretches"] = s.planar.stretches;
    j["membership_x"] = s.planar.membership_x;
    j["membership_y"] = s.planar.membership_y;
    j["membership_total"] = s.planar.membership_x + s.planar.membership_y;
    j["catalog_x"] = s.planar.catalog_x;
    j["catalog_y"] = s.planar.catalog_y;
  } else {
    j["step"] = s.step;
    j["marked_cells"] = s.marked_cells;
    j["children"] = s.children;
    j["max_slab_facets"] = s.max_slab_facets;
  }
  return j;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw UsageError("line " + std::to_string(line) + ": " + what);
}

std::int64_t integer(const Json& v, std::size_t line, const char* what) {
  if (!v.is_number_integer()) fail(line, std::string(what) + " must be an integer");
  return v.get<std::int64_t>();
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  /// Next non-blank line parsed as a JSON object, or nullopt at end.
  std::optional<Json> next() {
    std::string s;
    while (std::getline(is_, s)) {
      ++line_;
      if (s.find_first_not_of(" \t\r") == std::string::npos) continue;
      Json j;
      try {
        j = Json::parse(s);
      } catch (const Json::parse_error& e) {
        fail(line_, std::string("invalid JSON: ") + e.what());
      }
      if (!j.is_object()) fail(line_, "expected a JSON object");
      return j;
    }
    return std::nullopt;
  }
  std::size_t line() const { return line_; }

 private:
  std::istream& is_;
  std::size_t line_ = 0;
};

struct Header {
  int d = 0;
  std::size_t n = 0;
  std::optional<double> delta;
};

Header read_header(LineReader& in) {
  auto h = in.next();
  if (!h) throw UsageError("empty input: missing header");
  if (!h->contains("d") || !h->contains("n")) fail(in.line(), "header must contain \"d\" and \"n\"");
  Header out;
  const auto d = integer((*h)["d"], in.line(), "d");
  const auto n = integer((*h)["n"], in.line(), "n");
  if (d < 2 || d > kMaxDim) fail(in.line(), "d must be in [2, " + std::to_string(kMaxDim) + "]");
  if (n < 0) fail(in.line(), "n must be nonnegative");
  out.d = static_cast<int>(d);
  out.n = static_cast<std::size_t>(n);
  if (h->contains("delta")) {
    if (!(*h)["delta"].is_number()) fail(in.line(), "delta must be a number");
    out.delta = (*h)["delta"].get<double>();
  }
  return out;
}

Box read_box(const Json& r, const char* key, int d, std::size_t line) {
  for (const char* k : {key, "lo", "hi"})
    if (!r.contains(k)) fail(line, std::string("missing \"") + k + "\"");
  const auto id = integer(r[key], line, key);
  if (id < 0 || id > static_cast<std::int64_t>(UINT32_MAX)) fail(line, std::string(key) + " out of range");
  const Json& lo = r["lo"];
  const Json& hi = r["hi"];
  if (!lo.is_array() || !hi.is_array() || lo.size() != static_cast<std::size_t>(d) ||
      hi.size() != static_cast<std::size_t>(d))
    fail(line, "lo and hi must be arrays of length " + std::to_string(d));
  Box b;
  b.id = static_cast<std::uint32_t>(id);
  b.dim = d;
  for (int t = 0; t < d; ++t) {
    b.lo[t] = integer(lo[t], line, "coordinate");
    b.hi[t] = integer(hi[t], line, "coordinate");
    if (b.lo[t] < kNegInf / 2 || b.hi[t] > kPosInf / 2) fail(line, "coordinate out of range");
  }
  if (!b.valid()) fail(line, "lo must not exceed hi");
  return b;
}

}  // namespace

void write_instance(std::ostream& os, int d, std::span<const Box> boxes) {
  Json h;
  h["d"] = d;
  h["n"] = boxes.size();
  os << h.dump() << '\n';
  for (const Box& b : boxes) os << box_record("id", b).dump() << '\n';
}

void write_build(std::ostream& os, int d, double delta, const BpiStats& stats, std::span<const Box> boxes) {
  Json h;
  h["d"] = d;
  h["n"] = boxes.size();
  h["delta"] = delta;
  h["stats"] = stats_object(stats);
  os << h.dump() << '\n';
  for (const Box& b : boxes) os << box_record("id", b).dump() << '\n';
}

Instance read_instance(std::istream& is) {
  LineReader in(is);
  const Header h = read_header(in);
  Instance inst;
  inst.d = h.d;
  inst.delta = h.delta;
  std::vector<bool> seen(h.n + 1, false);
  while (auto r = in.next()) {
    Box b = read_box(*r, "id", h.d, in.line());
    if (b.id < 1 || b.id > h.n) fail(in.line(), "id must be in [1, n]");
    if (seen[b.id]) fail(in.line(), "duplicate id " + std::to_string(b.id));
    seen[b.id] = true;
    inst.boxes.push_back(b);
  }
  if (inst.boxes.size() != h.n)
    throw UsageError("header announces " + std::to_string(h.n) + " boxes, found " + std::to_string(inst.boxes.size()));
  return inst;
}

void write_queries(std::ostream& os, int d, std::span<const Box> queries) {
  Json h;
  h["d"] = d;
  h["n"] = queries.size();
  os << h.dump() << '\n';
  for (const Box& q : queries) os << box_record("qid", q).dump() << '\n';
}

std::vector<Box> read_queries(std::istream& is) {
  LineReader in(is);
  const Header h = read_header(in);
  std::vector<Box> out;
  while (auto r = in.next()) out.push_back(read_box(*r, "qid", h.d, in.line()));
  if (out.size() != h.n)
    throw UsageError("header announces " + std::to_string(h.n) + " queries, found " + std::to_string(out.size()));
  return out;
}

void write_result(std::ostream& os, std::uint32_t qid, std::vector<PairReport> pairs, const QueryCounters& ctr) {
  std::sort(pairs.begin(), pairs.end(), [](const PairReport& a, const PairReport& b) { return a.key() < b.key(); });
  Json r;
  r["qid"] = qid;
  Json ps = Json::array();
  Json tags = Json::array();
  for (const auto& p : pairs) {
    ps.push_back({p.i, p.j});
    tags.push_back(tag_name(p.tag));
  }
  r["pairs"] = std::move(ps);
  r["tags"] = std::move(tags);
  Json c;
  c["nodes_visited"] = ctr.nodes_visited;
  c["list_steps"] = ctr.list_steps;
  c["candidates"] = ctr.candidates;
  c["reported"] = ctr.reported;
  c["work"] = ctr.work();
  r["counters"] = std::move(c);
  os << r.dump() << '\n';
}

std::string stats_json(const BpiStats& s) { return stats_object(s).dump(); }

}  // namespace bpi
