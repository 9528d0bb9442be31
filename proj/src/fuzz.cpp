#include "bpi/fuzz.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "bpi/highdim.hpp"
#include "bpi/oracle.hpp"

namespace bpi {

namespace {

std::string pair_text(std::uint32_t i, std::uint32_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

std::optional<std::string> differential_check(const std::vector<Box>& boxes, int d, double delta, const Box& q) {
  std::vector<PairReport> got;
  try {
    BpiStructure s(boxes, d, delta);
    QueryCounters ctr;
    got = s.query(q, ctr);
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
  std::unordered_set<std::uint64_t> seen;
  for (const auto& p : got)
    if (!seen.insert(p.key()).second) return "duplicate pair " + pair_text(p.i, p.j);
  const auto want = oracle::pairs(boxes, q);
  for (const auto& [i, j] : want)
    if (!seen.count(pair_key(i, j))) return "missing pair " + pair_text(i, j);
  if (got.size() != want.size()) {
    std::unordered_set<std::uint64_t> expected;
    for (const auto& [i, j] : want) expected.insert(pair_key(i, j));
    for (const auto& p : got)
      if (!expected.count(p.key())) return "extra pair " + pair_text(p.i, p.j);
  }
  return std::nullopt;
}

Mismatch minimize(Mismatch m, const FailureCheck& still_fails) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < m.boxes.size();) {
      auto fewer = m.boxes;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(k));
      if (auto why = still_fails(fewer)) {
        m.boxes = std::move(fewer);
        m.reason = *why;
        changed = true;
      } else {
        ++k;
      }
    }
  }
  auto renumbered = m.boxes;
  for (std::uint32_t i = 0; i < renumbered.size(); ++i) renumbered[i].id = i + 1;
  if (auto why = still_fails(renumbered)) {
    m.boxes = std::move(renumbered);
    m.reason = *why;
  }
  return m;
}

Mismatch minimize(Mismatch m) {
  const int d = m.d;
  const double delta = m.delta;
  const Box q = m.query;
  return minimize(std::move(m), [&](const std::vector<Box>& boxes) { return differential_check(boxes, d, delta, q); });
}

double fuzz_delta(int d, std::size_t trial) {
  const double choices[3] = {1.0 / d, 0.5, 0.75};
  return choices[trial % 3];
}

FuzzReport run_fuzz(const FuzzConfig& cfg) {
  FuzzReport rep;
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    GenParams p;
    p.seed = rng();
    p.n = 1 + rng() % std::max<std::size_t>(1, cfg.n_max);
    p.d = cfg.d;
    p.dist = cfg.dist.value_or(kAllDistributions[t % std::size(kAllDistributions)]);
    p.range = cfg.range;
    const double delta = cfg.delta.value_or(fuzz_delta(cfg.d, t));
    const auto boxes = generate_boxes(p);
    const auto qs = generate_queries(rng(), cfg.queries, cfg.d, cfg.range);
    ++rep.instances;

    std::optional<BpiStructure> s;
    std::string build_error;
    try {
      s.emplace(boxes, cfg.d, delta);
    } catch (const std::exception& e) {
      build_error = e.what();
    }
    for (const Box& q : qs) {
      ++rep.queries;
      std::optional<std::string> why;
      if (!s) {
        why = "exception: " + build_error;
      } else {
        // Query the shared structure; the slower rebuild-per-check path
        // is only used while minimizing.
        QueryCounters ctr;
        std::vector<PairReport> got;
        try {
          got = s->query(q, ctr);
        } catch (const std::exception& e) {
          why = std::string("exception: ") + e.what();
        }
        if (!why) {
          std::vector<oracle::IdPair> ids;
          for (const auto& r : got) ids.emplace_back(r.i, r.j);
          std::sort(ids.begin(), ids.end());
          if (ids != oracle::pairs(boxes, q))
            why = differential_check(boxes, cfg.d, delta, q).value_or("output differs from brute force");
        }
      }
      if (why) {
        rep.first = minimize(Mismatch{cfg.d, delta, boxes, q, *why});
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace bpi
