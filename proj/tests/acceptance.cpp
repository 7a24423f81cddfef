#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "linkeval_checks.hpp"
#include "treepath/bench.hpp"
#include "treepath/cli.hpp"
#include "treepath/oracles.hpp"

using namespace treepath;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

void report(int id, const char* name, const Outcome& o) {
  std::printf("criterion %d %s: %s (%s)\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
}

std::vector<VertexPair> edge_order(const Digraph& t) {
  std::vector<VertexPair> e;
  for (const Arc& a : t.arcs) e.emplace_back(a.u, a.v);
  return e;
}

// One random instance of module `kind`, checked against its brute-force oracle.
bool oracle_instance(int kind, std::uint64_t seed) {
  gen::Rng rng(seed);
  std::size_t n = rng.range(2, 150);
  std::size_t g = rng.range(1, 6);
  switch (kind) {
    case 0: {
      RootedTree t = root_tree(gen::random_tree(n, seed, 0.1 * static_cast<double>(rng.below(10))));
      auto q = gen::random_queries(n, 3 * n, seed + 1);
      return nca_linear(t, q, g) == oracle::nca(t, q) && nca_ahu(t, q) == oracle::nca(t, q);
    }
    case 1: {
      Digraph tr = gen::random_tree(n, seed, 0.3, true, 50);
      auto e = detail::keyed_edges(tr);
      auto q = gen::random_queries(n, 3 * n, seed + 1);
      return path_maxima(n, e, q, g) == oracle::path_maxima(n, e, q);
    }
    case 2: {
      Digraph gr = gen::random_graph(n, 4 * n, seed, rng.chance(0.5) ? 10 : 1000);
      auto mst = build_mst_kkt(gr, seed);
      if (mst != kruskal_mst(gr)) return false;
      Digraph t = gen::subgraph(gr, mst);
      if (!verify_mst(gr, t, g).minimum) return false;
      // A perturbed tree must be judged exactly as the oracle judges it.
      std::vector<char> in(gr.arcs.size(), 0);
      for (auto i : mst) in[i] = 1;
      for (int attempt = 0; attempt < 20; ++attempt) {
        auto add = static_cast<std::uint32_t>(rng.below(gr.arcs.size()));
        if (in[add] || gr.arcs[add].u == gr.arcs[add].v || mst.empty()) continue;
        auto other = mst;
        other[rng.below(other.size())] = add;
        Digraph t2 = gen::subgraph(gr, other);
        try {
          root_tree(t2);
        } catch (const std::invalid_argument&) {
          continue;
        }
        return verify_mst(gr, t2, g).minimum == oracle::is_minimum(gr, t2);
      }
      return true;
    }
    case 3: {
      Digraph fg = gen::random_flowgraph(n, 3 * n, seed, 0.05 + 0.5 * static_cast<double>(rng.below(100)) / 100.0);
      if (interval_heads(fg, false, g) != oracle::interval_heads(fg)) return false;
      PreorderGraph pg = preorder_graph(fg);
      TreePartition part = fringe_core(pg.tree, g);
      auto want = oracle::compress_heads(oracle::interval_heads(fg), [&](Vertex u) { return part.is_core(pg.to_pre[u]); });
      return interval_heads(fg, true, g) == want;
    }
    case 4: {
      Digraph fg = gen::random_flowgraph(n, 2 * n + rng.below(3 * n), seed, 0.3, 0.1 * static_cast<double>(rng.below(8)));
      auto want = oracle::dominators(fg);
      PreorderGraph pg = preorder_graph(fg);
      TreePartition part = fringe_core_paths(pg.tree, g);
      return semidominators(pg, part) == oracle::semidominators(pg) &&
             dominators(fg, DominatorAlgo::linear, g) == want && dominators(fg, DominatorAlgo::lt) == want &&
             dominators(fg, DominatorAlgo::naive) == want;
    }
    default: {
      Digraph t = gen::random_tree(n, seed, 0.1 * static_cast<double>(rng.below(10)));
      RootedTree rt = root_tree(t);
      auto e = edge_order(t);
      KruskalTree want = oracle::kruskal_tree(t);
      if (!(kruskal_tree(rt, e) == want) || !(kruskal_tree_linear(rt, e, g) == want)) return false;
      std::vector<std::uint32_t> sizes;
      for (std::size_t left = n - 1; left > 0;) {
        auto s = static_cast<std::uint32_t>(rng.range(1, std::min<std::size_t>(left, 5)));
        sizes.push_back(s);
        left -= s;
      }
      return oracle::compressed_kruskal_ok(t, sizes, compressed_kruskal(rt, e, sizes));
    }
  }
}

Outcome oracle_equivalence() {
  constexpr int kinds = 6, per_kind = 100;
  std::size_t failed = 0, total = 0;
  std::string first;
  for (int k = 0; k < kinds; ++k)
    for (int i = 0; i < per_kind; ++i) {
      std::uint64_t seed = splitmix64(static_cast<std::uint64_t>(k * 1000 + i));
      bool ok = false;
      try {
        ok = oracle_instance(k, seed);
      } catch (const std::exception& e) {
        if (first.empty()) first = e.what();
      }
      ++total;
      if (!ok) {
        ++failed;
        if (first.empty()) first = "kind " + std::to_string(k) + " seed " + std::to_string(seed);
      }
    }
  return {failed == 0, std::to_string(total) + " instances, " + std::to_string(failed) + " failed" +
                           (first.empty() ? "" : ", first: " + first)};
}

Outcome invariants() {
  std::size_t ops = 0, bad = 0;
  std::string first;
  for (LinkMode mode : {LinkMode::by_size, LinkMode::by_rank})
    for (std::uint64_t seed = 1; seed <= 250; ++seed) {
      auto r = testing::run_trace(8 + seed % 120, 400, seed * 31 + static_cast<std::uint64_t>(mode), mode);
      ops += r.ops;
      bad += r.violations + r.mismatches;
      if (first.empty() && !r.first.empty()) first = r.first;
    }
  // Reference forest of DSU: at most n / 2^h nodes of height h.
  std::size_t dsu_bad = 0;
  for (UnionMode mode : {UnionMode::by_size, UnionMode::by_rank}) {
    std::size_t n = 1 << 16;
    DisjointSets d(n, mode);
    gen::Rng rng(static_cast<std::uint64_t>(mode) + 3);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      Vertex a = static_cast<Vertex>(rng.range(1, n)), b = static_cast<Vertex>(rng.range(1, n));
      d.unite_any(a, b);
      if (k % 7 == 0) d.find(static_cast<Vertex>(rng.range(1, n)));
    }
    const auto& p = d.reference_parents();
    std::vector<std::uint32_t> height(n + 1, 0);
    for (Vertex v = 1; v <= n; ++v)
      for (Vertex x = v, h = 0; p[x] != kNone; x = p[x]) {
        ++h;
        if (height[p[x]] >= h) break;
        height[p[x]] = h;
      }
    std::map<std::uint32_t, std::size_t> count;
    for (Vertex v = 1; v <= n; ++v) ++count[height[v]];
    for (auto [h, c] : count)
      if ((static_cast<std::uint64_t>(c) << h) > n) ++dsu_bad;
  }
  return {bad == 0 && dsu_bad == 0 && ops >= 200000,
          std::to_string(ops) + " link-eval ops, " + std::to_string(bad) + " violations, " + std::to_string(dsu_bad) +
              " height-bound failures" + (first.empty() ? "" : ", first: " + first)};
}

Outcome linearity() {
  auto start = std::chrono::steady_clock::now();
  std::map<std::pair<std::string, std::string>, std::vector<double>> series;
  double lemma5_max = 0;
  for (const std::string& suite : bench_suites())
    for (std::size_t n = 1 << 12; n <= (1 << 18); n *= 2)
      for (const BenchRow& r : bench_run(suite, n, 1)) {
        series[{r.suite, r.counter}].push_back(r.normalized());
        if (suite == "dsu-lemma5") lemma5_max = std::max(lemma5_max, r.normalized());
      }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double worst = 0;
  std::string worst_name;
  for (const auto& [key, v] : series)
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i - 1] > 0 && v[i] / v[i - 1] - 1 > worst) {
        worst = v[i] / v[i - 1] - 1;
        worst_name = key.first + "/" + key.second;
      }
  char buf[256];
  std::snprintf(buf, sizeof buf, "worst growth %.1f%% (%s), dsu-lemma5 max %.3f, %.1f s", 100 * worst, worst_name.c_str(),
                lemma5_max, seconds);
  return {worst <= 0.10 && lemma5_max <= 8 && seconds < 120, buf};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "treepath_acceptance";
  fs::create_directories(dir);
  auto put = [&](const char* name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  };
  Digraph t = gen::random_tree(3000, 11, 0.2);
  std::string queries;
  for (auto [u, v] : gen::random_queries(3000, 6000, 12)) queries += "q " + std::to_string(u) + " " + std::to_string(v) + "\n";
  Digraph gr = gen::random_graph(2000, 8000, 13);
  Digraph fg = gen::random_flowgraph(2000, 8000, 14);
  std::string tp = put("t", serialize(t)), qp = put("q", queries), gp = put("g", serialize(gr)), fp = put("f", serialize(fg));
  std::string mp = put("m", serialize(gen::subgraph(gr, kruskal_mst(gr))));
  std::vector<std::vector<std::string>> commands{
      {"nca", tp, qp},          {"nca", tp, qp, "--algo", "ahu"},
      {"mst", "verify", gp, mp}, {"mst", "build", gp, "--seed", "3"},
      {"intervals", fp},        {"intervals", fp, "--compressed"},
      {"dominators", fp},       {"dominators", fp, "--algo", "lt"},
      {"kruskal", tp},          {"kruskal", tp, "--linear", "--stats"},
      {"kruskal", tp, "--groups", "1000,999,1000"},
      {"bench", "--suite", "all", "--sizes", "1k,2k"}};
  std::size_t differ = 0, failed = 0;
  for (const auto& cmd : commands) {
    std::ostringstream o1, e1, o2, e2;
    int c1 = cli::run(cmd, o1, e1), c2 = cli::run(cmd, o2, e2);
    failed += c1 != 0;
    differ += c1 != c2 || o1.str() != o2.str() || e1.str() != e2.str();
  }
  fs::remove_all(dir);
  return {differ == 0 && failed == 0, std::to_string(commands.size()) + " commands, " + std::to_string(differ) +
                                          " differ, " + std::to_string(failed) + " failed"};
}

Outcome inverse_ackermann_bound() {
  unsigned at16 = inverse_ackermann(1 << 16, 1 << 16);
  unsigned worst = 0;
  gen::Rng rng(2);
  for (unsigned bits = 1; bits <= 64; ++bits)
    for (int k = 0; k < 50; ++k) {
      std::uint64_t n = bits == 64 ? rng.next() | (std::uint64_t{1} << 63) : (std::uint64_t{1} << bits) | rng.below(std::uint64_t{1} << bits);
      std::uint64_t room = UINT64_MAX - n;
      std::uint64_t m = n + (room ? rng.below(std::min(room, n)) : 0);
      worst = std::max(worst, inverse_ackermann(m, n));
    }
  worst = std::max(worst, inverse_ackermann(UINT64_MAX, UINT64_MAX));
  return {at16 == 4 && worst <= 4, "alpha(2^16, 2^16) = " + std::to_string(at16) + ", max sampled " + std::to_string(worst)};
}

}  // namespace

int main() {
  std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle-equivalence", oracle_equivalence},
      {"invariants", invariants},
      {"linearity", linearity},
      {"determinism", determinism},
      {"inverse-ackermann", inverse_ackermann_bound}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(static_cast<int>(i + 1), criteria[i].first, o);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
