#include <doctest.h>

#include <random>

#include "bpi/oracle.hpp"
#include "bpi/planar.hpp"
#include "bpi/substructures.hpp"
#include "support.hpp"

using namespace bpi;
using bpi::testing::random_boxes;
using bpi::testing::random_query;
using bpi::testing::sorted;

TEST_CASE("stretch of a partly covered side") {
  const std::vector<Box> s{Box::make2(1, 0, 4, 0, 4), Box::make2(2, 2, 6, 2, 6)};
  StabbingStructure ptenc(s);
  RectIntersectIndex recint(s, &ptenc);
  const auto st = compute_stretches(s, recint);
  bool found = false;
  for (const auto& x : st)
    if (x.owner == 0 && x.side == Side::Top) {
      found = true;
      CHECK(x.fixed == 4);
      CHECK(x.lo == 2);
      CHECK(x.hi == 4);
    }
  CHECK(found);
  CHECK(st == oracle::stretches(s));
}

TEST_CASE("isolated rectangle has no stretches; covered side is its own stretch") {
  const std::vector<Box> s{Box::make2(1, 0, 1, 0, 1), Box::make2(2, 10, 12, 10, 20), Box::make2(3, 9, 13, 15, 25)};
  StabbingStructure ptenc(s);
  RectIntersectIndex recint(s, &ptenc);
  const auto st = compute_stretches(s, recint);
  for (const auto& x : st) CHECK(x.owner != 0);
  bool top_of_two = false;
  for (const auto& x : st)
    if (x.owner == 1 && x.side == Side::Top) {
      top_of_two = true;
      CHECK(x.lo == 10);
      CHECK(x.hi == 12);
    }
  CHECK(top_of_two);
}

TEST_CASE("stretch spans the hull of separated intersections") {
  const std::vector<Box> s{Box::make2(1, 0, 10, 0, 2), Box::make2(2, 1, 2, 2, 5), Box::make2(3, 8, 9, 2, 5)};
  StabbingStructure ptenc(s);
  RectIntersectIndex recint(s, &ptenc);
  const auto st = compute_stretches(s, recint);
  CHECK(st == oracle::stretches(s));
  for (const auto& x : st)
    if (x.owner == 0 && x.side == Side::Top) {
      CHECK(x.lo == 1);
      CHECK(x.hi == 9);
    }
}

TEST_CASE("stretches match the direct scan on random instances") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_boxes(rng, 1 + trial % 40, 2, 16, 1 + trial % 8);
    StabbingStructure ptenc(s);
    RectIntersectIndex recint(s, &ptenc);
    REQUIRE(compute_stretches(s, recint) == oracle::stretches(s));
  }
}

TEST_CASE("rectangle intersection, crossing, endpoint and walk structures match brute force") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 120; ++trial) {
    const auto s = random_boxes(rng, 2 + trial % 50, 2, 20, 1 + trial % 9);
    StabbingStructure ptenc(s);
    RectIntersectIndex recint(s, &ptenc);
    const auto st = compute_stretches(s, recint);
    CrossingStructure cross(st);
    EndpointRangeStructure ends(st);
    SideWalker walker(s, st);
    std::vector<std::array<Scalar, 2>> pts;
    for (const auto& x : st) {
      pts.push_back(x.endpoint(0));
      pts.push_back(x.endpoint(1));
    }
    EndpointEntryTable table(ptenc, pts);
    for (std::uint32_t e = 0; e < pts.size(); ++e) {
      QueryCounters ctr;
      std::vector<std::uint32_t> want;
      for (std::uint32_t i = 0; i < s.size(); ++i)
        if (s[i].contains_point(pts[e])) want.push_back(i);
      CHECK(sorted(table.enumerate(e, ctr)) == want);
    }
    for (int k = 0; k < 30; ++k) {
      const Box q = random_query(rng, 2, 20, 8);
      QueryCounters ctr;
      std::vector<std::uint32_t> want;
      for (std::uint32_t i = 0; i < s.size(); ++i)
        if (s[i].intersects(q)) want.push_back(i);
      CHECK(recint.report(q, ctr) == want);

      for (bool vertical : {true, false}) {
        std::vector<std::uint32_t> cw;
        for (std::uint32_t i = 0; i < st.size(); ++i)
          if (st[i].vertical() == vertical && st[i].crosses(q)) cw.push_back(i);
        CHECK(sorted(cross.report(q, vertical, ctr)) == cw);
        CHECK(cross.any(q, vertical, ctr) == !cw.empty());
      }

      std::vector<std::uint32_t> ew;
      for (std::uint32_t e = 0; e < pts.size(); ++e)
        if (q.contains_point(pts[e])) ew.push_back(e);
      CHECK(sorted(ends.report(q, ctr)) == ew);

      for (auto e : ew) {
        const Stretch& x = st[e / 2];
        Box part = x.as_box();
        const int along = x.vertical() ? 1 : 0;
        part.lo[along] = std::max(part.lo[along], q.lo[along]);
        part.hi[along] = std::min(part.hi[along], q.hi[along]);
        // rectangles with an orthogonal side meeting stretch ∩ q
        std::vector<std::uint32_t> ww;
        for (std::uint32_t i = 0; i < s.size(); ++i) {
          const int across = 1 - along;
          bool hit = false;
          for (Scalar f : {s[i].lo[along], s[i].hi[along]}) {
            if (f < part.lo[along] || f > part.hi[along]) continue;
            if (s[i].lo[across] <= x.fixed && x.fixed <= s[i].hi[across]) hit = true;
          }
          if (hit) ww.push_back(i);
        }
        std::vector<std::uint32_t> got;
        walker.walk(e / 2, e % 2, q, ctr, [&](std::uint32_t i) { got.push_back(i); });
        std::sort(got.begin(), got.end());
        got.erase(std::unique(got.begin(), got.end()), got.end());
        CHECK(got == ww);
      }
    }
  }
}
