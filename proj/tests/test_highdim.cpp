#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "bpi/highdim.hpp"
#include "bpi/oracle.hpp"
#include "support.hpp"

using namespace bpi;
using bpi::testing::random_boxes;
using bpi::testing::random_query;

namespace {

Box cube(std::uint32_t id, int d, Scalar lo, Scalar hi) {
  Box b;
  b.id = id;
  b.dim = d;
  for (int t = 0; t < d; ++t) {
    b.lo[t] = lo;
    b.hi[t] = hi;
  }
  return b;
}

// Four boxes whose projections on every axis are 1..8.
std::vector<Box> staircase(int d) {
  std::vector<Box> s;
  for (std::uint32_t i = 0; i < 4; ++i) s.push_back(cube(i + 1, d, 2 * i + 1, 2 * i + 2));
  return s;
}

std::vector<oracle::IdPair> id_pairs(const std::vector<PairReport>& r) {
  std::vector<oracle::IdPair> out;
  for (const auto& p : r) out.emplace_back(p.i, p.j);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("grid chooses every step-th projection") {
  const auto s = staircase(3);
  const GridAxis g = build_grid(s, 0, 1.0 / 3.0);
  CHECK(g.step == 2);
  CHECK(g.chosen == std::vector<Scalar>{2, 4, 6, 8});
  CHECK(g.interval_count() == 5);
  CHECK(g.interval_lo(0) == kNegInf);
  CHECK(g.interval_hi(0) == 2);
  CHECK(g.interval_lo(4) == 8);
  CHECK(g.interval_hi(4) == kPosInf);
}

TEST_CASE("grid with all projections equal has one chosen value") {
  std::vector<Box> s;
  for (std::uint32_t i = 0; i < 5; ++i) s.push_back(cube(i + 1, 3, 7, 7));
  const GridAxis g = build_grid(s, 1, 0.5);
  CHECK(g.chosen == std::vector<Scalar>{7});
  CHECK(g.interval_count() == 2);
}

TEST_CASE("grid step is exact at perfect powers") {
  CHECK(grid_step(64, 0.5) == 8);
  CHECK(grid_step(4, 1.0 / 3.0) == 2);
  CHECK(grid_step(1000, 2.0 / 3.0) == 10);
  CHECK(grid_step(100, 0.75) == 3);
  CHECK(grid_step(1, 0.5) == 1);
}

TEST_CASE("interval count and slab population bounds") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 3 + trial % 3;
    const auto s = random_boxes(rng, 1 + trial % 90, d, 10 + trial, 1 + trial % 15);
    for (double delta : {1.0 / d, 0.5, 0.75}) {
      for (int t = 0; t < d; ++t) {
        const GridAxis g = build_grid(s, t, delta);
        CHECK(static_cast<std::size_t>(g.interval_count()) <= 2 * s.size() / g.step + 2);
        for (std::int32_t k = 0; k < g.interval_count(); ++k)
          CHECK(g.strictly_inside(s, k) <= static_cast<std::size_t>(2 * g.step));
      }
    }
  }
}

TEST_CASE("canonical cell uses the left-endpoint tie rule") {
  const Grid grid(staircase(2), 0.5);
  REQUIRE(grid.axis(0).chosen == std::vector<Scalar>{2, 4, 6, 8});
  auto cell_of = [&](Scalar x, Scalar y) { return grid.canonical_cell(Box::make2(0, x, x + 1, y, y + 1)); };
  // (3,5) lies in [2,4] x [4,6]
  CHECK(cell_of(3, 5)[0] == 1);
  CHECK(cell_of(3, 5)[1] == 2);
  // (4,4) belongs to [4,6] x [4,6]
  CHECK(cell_of(4, 4)[0] == 2);
  CHECK(cell_of(4, 4)[1] == 2);
  // below every chosen value: the sentinel interval
  CHECK(cell_of(-5, 1)[0] == 0);
  CHECK(cell_of(-5, 1)[1] == 0);
  std::mt19937_64 rng(43);
  for (int k = 0; k < 200; ++k) {
    const Box b = random_query(rng, 2, 12, 3);
    CHECK(grid.canonical_cell(b) == oracle::canonical_cell(grid, b));
  }
}

TEST_CASE("gridcont snaps the query to whole intervals") {
  // Projections -1..6 on every axis; step 2 chooses {0, 2, 4, 6}.
  const std::vector<Box> s{cube(1, 3, -1, 2), cube(2, 3, 0, 4), cube(3, 3, 1, 6), cube(4, 3, 3, 5)};
  BpiStructure bpi(s, 3, 1.0 / 3.0);
  REQUIRE(bpi.grid().axis(0).chosen == std::vector<Scalar>{0, 2, 4, 6});
  GridCell low{}, mid{};
  low[0] = low[1] = low[2] = 1;
  mid[0] = mid[1] = mid[2] = 2;
  CHECK(bpi.marked_cells() == std::set<GridCell>{low, mid});
  QueryCounters ctr;
  // [1,5] snaps to [2,4], which holds only the middle cell
  CHECK(bpi.gridcont_query(cube(0, 3, 1, 5), ctr) == std::vector<GridCell>{mid});
  CHECK(bpi.gridcont_query(cube(0, 3, 2, 3), ctr).empty());
}

TEST_CASE("gridcont reports exactly the marked cells inside the query") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 3 + trial % 2;
    const auto s = random_boxes(rng, 5 + trial % 50, d, 30, 10);
    BpiStructure bpi(s, d, 0.5);
    CHECK(bpi.marked_cells() == oracle::marked_cells(s, bpi.grid()));
    for (int k = 0; k < 20; ++k) {
      const Box q = random_query(rng, d, 30, 25);
      QueryCounters ctr;
      auto got = bpi.gridcont_query(q, ctr);
      std::sort(got.begin(), got.end());
      std::vector<GridCell> want;
      for (const auto& c : bpi.marked_cells())
        if (q.contains(bpi.grid().cell_box(c))) want.push_back(c);
      CHECK(got == want);
    }
  }
}

TEST_CASE("boxint reports intersecting boxes") {
  const std::vector<Box> s{cube(1, 3, 0, 4), cube(2, 3, 2, 6)};
  BpiStructure bpi(s, 3, 0.5);
  QueryCounters ctr;
  CHECK(bpi.boxint_query(cube(0, 3, 3, 3), ctr) == std::vector<std::uint32_t>{1, 2});
  CHECK(bpi.boxint_query(cube(0, 3, 10, 11), ctr).empty());

  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 80; ++trial) {
    const int d = 3 + trial % 2;
    const auto boxes = random_boxes(rng, 1 + trial % 70, d, 20, 1 + trial % 10);
    std::vector<std::uint32_t> payloads(boxes.size());
    for (std::uint32_t i = 0; i < boxes.size(); ++i) payloads[i] = 1000 + i;
    BoxIntStructure bi(boxes, payloads);
    for (int k = 0; k < 25; ++k) {
      const Box q = random_query(rng, d, 20, 8);
      auto want = oracle::intersecting(boxes, q);
      for (auto& w : want) w += 1000;
      CHECK(bi.report(q, ctr) == want);
    }
  }
}

TEST_CASE("boxint above the scan cutoff uses the facet recursion") {
  std::mt19937_64 rng(57);
  for (auto [d, n] : {std::pair{3, 400}, std::pair{4, 300}}) {
    const auto boxes = random_boxes(rng, n, d, 200, 40);
    std::vector<std::uint32_t> payloads(boxes.size());
    for (std::uint32_t i = 0; i < boxes.size(); ++i) payloads[i] = i;
    BoxIntStructure bi(boxes, payloads);
    CHECK(bi.stored_cells() > 10 * boxes.size());
    for (int k = 0; k < 200; ++k) {
      const Box q = random_query(rng, d, 200, 60);
      QueryCounters ctr;
      CHECK(bi.report(q, ctr) == oracle::intersecting(boxes, q));
    }
  }
}

TEST_CASE("facet provenance breaks ties toward the smaller id") {
  const Box a = cube(1, 3, 0, 5), b = cube(2, 3, 0, 5);
  CHECK(facet_provenance(a, b) == 0b111);
  CHECK(facet_provenance(b, a) == 0);
  Box c = cube(3, 3, 1, 5);
  c.lo[1] = 0;
  CHECK(facet_provenance(c, a) == 0b101);
}

TEST_CASE("pairfind on a single pair") {
  const std::vector<Box> s{cube(1, 3, 0, 4), cube(2, 3, 2, 6), cube(3, 3, 20, 21)};
  BpiStructure bpi(s, 3, 0.5);
  REQUIRE(bpi.marked_cells().size() == 1);
  QueryCounters ctr;
  const auto r = bpi.pairfind_query(*bpi.marked_cells().begin(), ctr);
  REQUIRE(r.size() == 1);
  CHECK(r[0].i == 1);
  CHECK(r[0].j == 2);
  GridCell unmarked{};
  unmarked[0] = 99;
  CHECK_THROWS_AS(bpi.pairfind_query(unmarked, ctr), UsageError);
}

TEST_CASE("pairfind over all marked cells finds every intersecting pair once") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 3 + trial % 3;
    const auto s = random_boxes(rng, 2 + trial % 40, d, 16, 1 + trial % 8);
    BpiStructure bpi(s, d, trial % 2 ? 0.5 : 1.0 / d);
    std::vector<oracle::IdPair> got;
    QueryCounters ctr;
    for (const auto& c : bpi.marked_cells()) {
      const auto r = bpi.pairfind_query(c, ctr);
      CHECK(id_pairs(r) == oracle::pairs_in_cell(s, bpi.grid(), c));
      for (const auto& p : r) got.emplace_back(p.i, p.j);
    }
    std::sort(got.begin(), got.end());
    CHECK(std::adjacent_find(got.begin(), got.end()) == got.end());
    const Box everything = cube(0, d, kNegInf / 2, kPosInf / 2);
    CHECK(got == oracle::pairs(s, everything));
  }
}

TEST_CASE("two overlapping cubes, query containing their intersection") {
  const std::vector<Box> s{cube(1, 3, 0, 4), cube(2, 3, 2, 6)};
  BpiStructure bpi(s, 3, 0.5);
  QueryCounters ctr;
  const auto r = bpi.query(cube(0, 3, 1, 5), ctr);
  CHECK(id_pairs(r) == std::vector<oracle::IdPair>{{1, 2}});
}

TEST_CASE("delta outside [1/d, 1) is a usage error") {
  const std::vector<Box> s{cube(1, 3, 0, 4)};
  CHECK_THROWS_AS(BpiStructure(s, 3, 0.2), UsageError);
  CHECK_THROWS_AS(BpiStructure(s, 3, 1.0), UsageError);
  CHECK_NOTHROW(BpiStructure(s, 3, 1.0 / 3.0));
}

TEST_CASE("bpi query equals the oracle in 3 to 5 dimensions") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 90; ++trial) {
    const int d = 3 + trial % 3;
    const double deltas[3] = {1.0 / d, 0.5, 0.75};
    const double delta = deltas[(trial / 3) % 3];
    const Scalar range = 20 + trial % 30;
    const auto s = random_boxes(rng, 1 + trial % 45, d, range, 2 + trial % 12);
    BpiStructure bpi(s, d, delta);
    const BpiStats st = bpi.stats();
    CHECK(st.max_slab_facets <= static_cast<std::size_t>(2 * grid_step(s.size(), delta)));
    for (int k = 0; k < 10; ++k) {
      const Box q = random_query(rng, d, range, range / 2);
      QueryCounters ctr;
      const auto got = bpi.query(q, ctr);
      REQUIRE_MESSAGE(id_pairs(got) == oracle::pairs(s, q), "trial " << trial << " d " << d << " q " << to_string(q));
    }
  }
}
