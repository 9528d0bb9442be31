// Command-line driver: gen | build | query | fuzz | bench | stats.
// Exit codes: 0 ok, 1 differential mismatch or failed internal check,
// 2 usage error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bpi/fuzz.hpp"
#include "bpi/generate.hpp"
#include "bpi/highdim.hpp"
#include "bpi/io.hpp"

namespace {

using namespace bpi;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

struct Options {
  std::uint64_t seed = 1;
  std::size_t n = 100;
  int d = 2;
  std::optional<double> delta;
  std::string dist = "uniform";
  std::string fuzz_dist = "all";
  std::string in;
  std::string out;
  std::string queries;
  std::size_t trials = 100;
  std::size_t query_count = 0;
  Scalar range = 0;  // 0: per-command default
  Scalar max_extent = 0;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw UsageError("cannot open " + path + " for writing");
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

template <typename Fn>
auto with_input(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") return fn(std::cin);
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  return fn(f);
}

Instance load_instance(const std::string& path) {
  return with_input(path, [](std::istream& is) { return read_instance(is); });
}

// δ from the command line wins over the build header; d = 2 ignores it.
double resolve_delta(const Options& o, const Instance& inst) {
  return o.delta.value_or(inst.delta.value_or(0.5));
}

std::unique_ptr<BpiStructure> build_structure(const Instance& inst, double delta) {
  return std::make_unique<BpiStructure>(inst.boxes, inst.d, delta);
}

void check_delta(int d, double delta) {
  if (d > 2 && !(delta >= 1.0 / d - 1e-12 && delta < 1.0))
    throw UsageError("delta must satisfy 1/d <= delta < 1 (got " + std::to_string(delta) + ")");
}

int cmd_gen(const Options& o) {
  Output out(o.out);
  if (o.query_count > 0) {
    write_queries(out.get(), o.d, generate_queries(o.seed, o.query_count, o.d, o.range));
    return kOk;
  }
  const GenParams p{o.seed, o.n, o.d, parse_distribution(o.dist), o.range, o.max_extent};
  write_instance(out.get(), o.d, generate_boxes(p));
  return kOk;
}

int cmd_build(const Options& o) {
  const Instance inst = load_instance(o.in);
  const double delta = resolve_delta(o, inst);
  check_delta(inst.d, delta);
  const auto s = build_structure(inst, delta);
  Output out(o.out);
  write_build(out.get(), inst.d, delta, s->stats(), inst.boxes);
  return kOk;
}

int cmd_stats(const Options& o) {
  const Instance inst = load_instance(o.in);
  const double delta = resolve_delta(o, inst);
  check_delta(inst.d, delta);
  Output out(o.out);
  out.get() << stats_json(build_structure(inst, delta)->stats()) << '\n';
  return kOk;
}

std::vector<Box> load_queries(const Options& o, int d) {
  if (!o.queries.empty()) {
    auto qs = with_input(o.queries, [](std::istream& is) { return read_queries(is); });
    for (const Box& q : qs)
      if (q.dim != d) throw UsageError("query dimension does not match the instance");
    return qs;
  }
  return generate_queries(o.seed, o.query_count > 0 ? o.query_count : o.trials, d, o.range);
}

int cmd_query(const Options& o) {
  if (o.queries.empty()) throw UsageError("query: --queries is required");
  const Instance inst = load_instance(o.in);
  const double delta = resolve_delta(o, inst);
  check_delta(inst.d, delta);
  const auto s = build_structure(inst, delta);
  const auto qs = load_queries(o, inst.d);
  Output out(o.out);
  for (const Box& q : qs) {
    QueryCounters ctr;
    auto pairs = s->query(q, ctr);
    write_result(out.get(), q.id, std::move(pairs), ctr);
  }
  return kOk;
}

int cmd_bench(const Options& o) {
  const Instance inst = load_instance(o.in);
  const double delta = resolve_delta(o, inst);
  check_delta(inst.d, delta);
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = build_structure(inst, delta);
  const double build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const auto qs = load_queries(o, inst.d);

  Output out(o.out);
  std::ostream& os = out.get();
  os << "# n=" << inst.boxes.size() << " d=" << inst.d << " delta=" << delta << " build_ms=" << std::fixed
     << std::setprecision(1) << build_ms << '\n';
  os << "qid\tk\tnodes_visited\tlist_steps\tcandidates\twork\tmicros\n";
  std::vector<std::uint64_t> zero_work;
  for (const Box& q : qs) {
    QueryCounters ctr;
    const auto start = std::chrono::steady_clock::now();
    const auto pairs = s->query(q, ctr);
    const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    if (pairs.empty()) zero_work.push_back(ctr.work());
    os << q.id << '\t' << pairs.size() << '\t' << ctr.nodes_visited << '\t' << ctr.list_steps << '\t'
       << ctr.candidates << '\t' << ctr.work() << '\t' << std::setprecision(1) << us << '\n';
  }
  if (!zero_work.empty()) {
    std::nth_element(zero_work.begin(), zero_work.begin() + zero_work.size() / 2, zero_work.end());
    os << "# k=0 queries: " << zero_work.size() << ", median work " << zero_work[zero_work.size() / 2] << '\n';
  }
  return kOk;
}

int cmd_fuzz(const Options& o) {
  FuzzConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.n_max = o.n;
  cfg.d = o.d;
  cfg.range = o.range;
  cfg.delta = o.delta;
  if (o.delta) check_delta(o.d, *o.delta);
  if (o.fuzz_dist != "all") cfg.dist = parse_distribution(o.fuzz_dist);
  const FuzzReport rep = run_fuzz(cfg);
  if (!rep.first) {
    std::cout << rep.instances << " instances, " << rep.queries << " queries, 0 mismatches\n";
    return kOk;
  }
  const Mismatch& m = *rep.first;
  std::cout << "mismatch after " << rep.instances << " instances: " << m.reason << '\n';
  std::cout << "# delta " << m.delta << "\n# query\n";
  write_queries(std::cout, m.d, std::span<const Box>(&m.query, 1));
  std::cout << "# minimized instance\n";
  write_instance(std::cout, m.d, m.boxes);
  return kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-restricted pairwise intersection of axis-parallel boxes"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--d", o.d, "dimension")->check(CLI::Range(2, kMaxDim));
    c->add_option("--delta", o.delta, "grid exponent, 1/d <= delta < 1 (d > 2)");
    c->add_option("--in", o.in, "input instance or build file (default stdin)");
    c->add_option("--out", o.out, "output file (default stdout)");
    c->add_option("--range", o.range, "coordinates in [0, range]")->check(CLI::PositiveNumber);
  };

  auto* gen = app.add_subcommand("gen", "generate an instance (or a query file with --queries-count)");
  add_common(gen);
  gen->add_option("--n", o.n, "number of boxes");
  gen->add_option("--dist", o.dist, "uniform | nested | slabs | clustered | degenerate-heavy");
  gen->add_option("--max-extent", o.max_extent, "uniform: largest side length (default range/4)");
  gen->add_option("--queries-count", o.query_count, "emit this many queries instead of an instance");

  auto* build = app.add_subcommand("build", "build the structure and write the build file with stats");
  add_common(build);

  auto* query = app.add_subcommand("query", "answer a query file");
  add_common(query);
  query->add_option("--queries", o.queries, "query file");

  auto* fuzz = app.add_subcommand("fuzz", "differential test against brute force");
  add_common(fuzz);
  fuzz->add_option("--trials", o.trials, "number of random instances");
  fuzz->add_option("--n", o.n, "maximum instance size");
  fuzz->add_option("--dist", o.fuzz_dist, "a distribution name, or 'all' to rotate");
  auto* bench = app.add_subcommand("bench", "per-query counters and latency");
  add_common(bench);
  bench->add_option("--queries", o.queries, "query file (default: --trials generated queries)");
  bench->add_option("--trials", o.trials, "number of generated queries");

  auto* stats = app.add_subcommand("stats", "structure statistics as JSON");
  add_common(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  // fuzz uses a small coordinate range by default to force ties.
  if (o.range == 0) o.range = fuzz->parsed() ? 32 : 100;

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (build->parsed()) return cmd_build(o);
    if (query->parsed()) return cmd_query(o);
    if (fuzz->parsed()) return cmd_fuzz(o);
    if (bench->parsed()) return cmd_bench(o);
    if (stats->parsed()) return cmd_stats(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal check failed: " << e.what() << '\n';
    return kMismatch;
  }
  return kUsage;
}
