#pragma once

#include <charconv>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "treepath/dominators.hpp"
#include "treepath/generators.hpp"
#include "treepath/intervals.hpp"
#include "treepath/kruskal.hpp"
#include "treepath/mst.hpp"
#include "treepath/nca.hpp"

namespace treepath {

struct BenchRow {
  std::string suite;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string counter;
  std::uint64_t value = 0;

  double normalized() const { return static_cast<double>(value) / static_cast<double>(n + m); }
};

inline const std::vector<std::string>& bench_suites() {
  static const std::vector<std::string> suites{"nca", "mst", "intervals", "dominators", "kruskal", "dsu-lemma5"};
  return suites;
}

/// Runs one suite at one size on a seeded random instance with m about 4n
/// (m = n - 1 for kruskal) and reports operation counters.
inline std::vector<BenchRow> bench_run(const std::string& suite, std::size_t n, std::uint64_t seed) {
  std::uint64_t s = splitmix64(seed ^ n);
  std::size_t m = 4 * n;
  std::vector<BenchRow> rows;
  auto add = [&](const char* counter, std::uint64_t value) { rows.push_back({suite, n, m, counter, value}); };
  std::size_t g = default_g(n);

  if (suite == "nca" || suite == "dsu-lemma5") {
    Digraph t = gen::random_tree(n, s, 0.2);
    RootedTree rt = root_tree(t);
    auto q = gen::random_queries(n, m, s + 1);
    NcaStats st;
    nca_linear(rt, q, g, &st);
    if (suite == "nca") {
      add("find_path_nodes", st.find_path_nodes);
      add("batch_work", st.batch.tokens + st.batch.sort_work);
      add("work", st.finds + st.find_path_nodes + st.batch.tokens + st.batch.sort_work);
    } else {
      add("find_path_nodes", st.find_path_nodes);
    }
  } else if (suite == "mst") {
    Digraph gr = gen::random_graph(n, m, s);
    auto mst = kruskal_mst(gr);
    PathMaxStats ps;
    verify_mst(gr, gen::subgraph(gr, mst), g, &ps);
    MstStats ms;
    build_mst_kkt(gr, s + 1, &ms);
    add("verify_compress_nodes", ps.compress_nodes);
    add("verify_work", ps.work);
    add("kkt_work", ms.work);
  } else if (suite == "intervals") {
    Digraph fg = gen::random_flowgraph(n, m, s);
    IntervalStats st;
    interval_heads(fg, false, g, &st);
    add("find_path_nodes", st.find_path_nodes + st.nca.find_path_nodes);
    add("bag_pops", st.bag_pops);
    add("work", st.finds + st.find_path_nodes + st.bag_pops + st.nca.finds + st.nca.find_path_nodes + st.batch.tokens +
                    st.batch.sort_work + st.nca.batch.tokens + st.nca.batch.sort_work);
  } else if (suite == "dominators") {
    Digraph fg = gen::random_flowgraph(n, m, s);
    DominatorStats st;
    dominators(fg, DominatorAlgo::linear, g, &st);
    add("compress_nodes", st.linkeval.compress_nodes);
    add("find_path_nodes", st.intervals.find_path_nodes + st.nca.find_path_nodes);
    add("work", st.linkeval.links + st.linkeval.evals + st.linkeval.compress_nodes + st.intervals.finds +
                    st.intervals.find_path_nodes + st.intervals.bag_pops + st.nca.finds + st.nca.find_path_nodes +
                    st.rdom.work + st.batch.tokens + st.batch.sort_work);
  } else if (suite == "kruskal") {
    m = n - 1;
    Digraph t = gen::random_tree(n, s, 0.2);
    RootedTree rt = root_tree(t);
    std::vector<VertexPair> order;
    for (const Arc& a : t.arcs) order.emplace_back(a.u, a.v);
    KruskalStats st;
    kruskal_tree_linear(rt, order, g, &st);
    add("live_finds", st.live_finds);
    add("find_path_nodes", st.find_path_nodes);
    add("work", st.live_finds + st.cached_finds + st.find_path_nodes + st.batch.tokens + st.batch.sort_work);
  } else {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  return rows;
}

/// Parses sizes such as "1k,2k,4096"; k means 1024.
inline std::vector<std::size_t> parse_sizes(const std::string& spec) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  while (i <= spec.size()) {
    std::size_t j = spec.find(',', i);
    if (j == std::string::npos) j = spec.size();
    std::string tok = spec.substr(i, j - i);
    std::size_t mult = 1;
    if (!tok.empty() && (tok.back() == 'k' || tok.back() == 'K')) {
      mult = 1024;
      tok.pop_back();
    }
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size() || v == 0)
      throw std::invalid_argument("bad size: " + spec.substr(i, j - i));
    out.push_back(v * mult);
    i = j + 1;
  }
  return out;
}

inline std::string bench_csv_header() { return "suite,n,m,counter,normalized\n"; }

inline std::string bench_csv_row(const BenchRow& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", r.normalized());
  return r.suite + "," + std::to_string(r.n) + "," + std::to_string(r.m) + "," + r.counter + "," + buf + "\n";
}

}  // namespace treepath
