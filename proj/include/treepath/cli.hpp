#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "treepath/bench.hpp"
#include "treepath/dominators.hpp"
#include "treepath/graphio.hpp"
#include "treepath/intervals.hpp"
#include "treepath/kruskal.hpp"
#include "treepath/mst.hpp"
#include "treepath/nca.hpp"
#include "treepath/oracles.hpp"

namespace treepath::cli {

struct RunConfig {
  std::vector<std::string> inputs;
  std::string algo;
  std::optional<std::size_t> g_override;
  std::uint64_t seed = 1;
  bool stats = false;
  bool oracle = false;
  bool compressed = false;
  bool linear = false;
  std::string groups;
  std::string suite;
  std::string sizes;
};

class Mismatch : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Digraph read_graph(const std::string& path, GraphKind kind) {
  Digraph g;
  try {
    g = parse_graph(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
  if (g.kind != kind) {
    const char* want = kind == GraphKind::graph ? "graph" : kind == GraphKind::flow ? "flow" : "tree";
    throw Error(path + ": expected a '" + want + "' file");
  }
  return g;
}

inline void stats_row(std::ostream& err, const char* structure, std::size_t n, std::uint64_t ops, std::uint64_t nodes) {
  err << structure << ',' << n << ',' << ops << ',' << nodes << '\n';
}

inline std::vector<std::uint32_t> parse_groups(const std::string& spec) {
  std::vector<std::uint32_t> out;
  for (std::size_t v : parse_sizes(spec)) out.push_back(static_cast<std::uint32_t>(v));
  return out;
}

inline void run_nca(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Digraph t = read_graph(c.inputs[0], GraphKind::tree);
  RootedTree rt = root_tree(t);
  std::vector<VertexPair> q;
  try {
    q = parse_queries(read_file(c.inputs[1]), t.n);
  } catch (const ParseError& e) {
    throw Error(c.inputs[1] + ": " + e.what());
  }
  NcaStats st;
  auto a = c.algo == "ahu" ? nca_ahu(rt, q, &st) : nca_linear(rt, q, c.g_override.value_or(default_g(t.n)), &st);
  for (std::size_t i = 0; i < q.size(); ++i) out << q[i].first << ' ' << q[i].second << ' ' << a[i] << '\n';
  if (c.stats) stats_row(err, "dsu", t.n, st.finds, st.find_path_nodes);
  if (c.oracle && oracle::nca(rt, q) != a) throw Mismatch("nca answers differ from the root-path oracle");
}

inline void run_mst_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Digraph g = read_graph(c.inputs[0], GraphKind::graph);
  Digraph t = read_graph(c.inputs[1], GraphKind::tree);
  PathMaxStats st;
  VerifyResult r = verify_mst(g, t, c.g_override, &st);
  if (r.minimum) out << "YES\n";
  else out << "NO\ne " << g.arcs[*r.violation].u << ' ' << g.arcs[*r.violation].v << '\n';
  if (c.stats) stats_row(err, "linkeval", g.n, st.big_queries, st.compress_nodes);
  if (c.oracle && oracle::is_minimum(g, t) != r.minimum) throw Mismatch("verification differs from the Kruskal oracle");
}

inline void run_mst_build(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Digraph g = read_graph(c.inputs[0], GraphKind::graph);
  MstStats st;
  auto edges = build_mst_kkt(g, c.seed, &st);
  for (std::uint32_t i : edges) {
    const Arc& a = g.arcs[i];
    out << "a " << a.u << ' ' << a.v << ' ' << format_weight(*a.w) << '\n';
  }
  if (c.stats) stats_row(err, "linkeval", g.n, st.work, st.compress_nodes);
  if (c.oracle && kruskal_mst(g) != edges) throw Mismatch("spanning tree differs from the Kruskal oracle");
}

inline void run_intervals(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Digraph g = read_graph(c.inputs[0], GraphKind::flow);
  IntervalStats st;
  auto h = interval_heads(g, c.compressed, c.g_override, &st);
  for (Vertex v = 1; v <= g.n; ++v) out << v << ' ' << h[v] << '\n';
  if (c.stats) stats_row(err, "dsu", g.n, st.finds, st.find_path_nodes);
  if (c.oracle) {
    auto want = oracle::interval_heads(g);
    if (c.compressed) {
      PreorderGraph pg = preorder_graph(g);
      TreePartition part = fringe_core(pg.tree, c.g_override.value_or(default_g(g.n)));
      want = oracle::compress_heads(want, [&](Vertex u) { return part.is_core(pg.to_pre[u]); });
    }
    if (want != h) throw Mismatch("interval heads differ from the brute-force oracle");
  }
}

inline void run_dominators(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Digraph g = read_graph(c.inputs[0], GraphKind::flow);
  DominatorAlgo algo = c.algo == "lt" ? DominatorAlgo::lt : c.algo == "naive" ? DominatorAlgo::naive : DominatorAlgo::linear;
  DominatorStats st;
  auto idom = dominators(g, algo, c.g_override, &st);
  for (Vertex v = 1; v <= g.n; ++v) out << v << ' ' << idom[v] << '\n';
  if (c.stats && algo != DominatorAlgo::naive)
    stats_row(err, "linkeval", g.n, st.linkeval.links + st.linkeval.evals, st.linkeval.compress_nodes);
  if (c.oracle && oracle::dominators(g) != idom) throw Mismatch("dominators differ from the vertex-removal oracle");
}

inline void run_kruskal(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Digraph t = read_graph(c.inputs[0], GraphKind::tree);
  RootedTree rt = root_tree(t);
  std::vector<VertexPair> order;
  for (const Arc& a : t.arcs) order.emplace_back(a.u, a.v);
  if (!c.groups.empty()) {
    auto sizes = parse_groups(c.groups);
    auto k = compressed_kruskal(rt, order, sizes);
    for (std::size_t i = 0; i < k.group.size(); ++i) {
      out << k.n + 1 + i << ' ' << k.group[i];
      for (Vertex x : k.children[i]) out << ' ' << x;
      out << '\n';
    }
    if (c.oracle && !oracle::compressed_kruskal_ok(t, sizes, k))
      throw Mismatch("compressed tree differs from prefix-union components");
    return;
  }
  KruskalStats st;
  KruskalTree k = c.linear ? kruskal_tree_linear(rt, order, c.g_override.value_or(default_g(t.n)), &st)
                           : kruskal_tree(rt, order, &st);
  for (std::size_t i = 1; i < t.n; ++i) {
    auto id = static_cast<Vertex>(t.n + i);
    out << id << ' ' << k.left[id] << ' ' << k.right[id] << ' ' << i << '\n';
  }
  if (c.stats) stats_row(err, "dsu", t.n, st.live_finds, st.find_path_nodes);
  if (c.oracle && !(oracle::kruskal_tree(t) == k)) throw Mismatch("Kruskal tree differs from the component oracle");
}

inline void run_bench(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> suites;
  if (c.suite == "all") suites = bench_suites();
  else suites.push_back(c.suite);
  auto sizes = parse_sizes(c.sizes);
  out << bench_csv_header();
  for (const auto& s : suites) {
    for (std::size_t n : sizes) {
      for (const BenchRow& r : bench_run(s, n, c.seed)) out << bench_csv_row(r);
    }
    if (c.oracle && s == "nca") {
      Digraph t = gen::random_tree(sizes.front(), c.seed);
      RootedTree rt = root_tree(t);
      auto q = gen::random_queries(t.n, 4 * t.n, c.seed + 1);
      if (nca_linear(rt, q, default_g(t.n)) != oracle::nca(rt, q)) throw Mismatch("bench nca spot check failed");
    }
  }
  if (c.stats) err << "suites," << suites.size() << ",sizes," << sizes.size() << '\n';
}

}  // namespace detail

/// Runs the command line `args` (without the program name). Exit status: 0 on
/// success, 2 on usage errors, 1 on input, algorithm or oracle failures.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree path evaluation algorithms", "treepath"};
  app.require_subcommand(1);
  RunConfig c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--g-override", c.g_override, "Microtree size bound")->check(CLI::PositiveNumber);
    sub->add_flag("--stats", c.stats, "Write counter CSV rows to stderr");
    sub->add_flag("--oracle", c.oracle, "Cross-check against a brute-force oracle");
  };

  auto* nca = app.add_subcommand("nca", "Offline nearest common ancestors");
  nca->add_option("tree", c.inputs, "Tree file and query file")->required()->expected(2);
  nca->add_option("--algo", c.algo, "linear or ahu")->check(CLI::IsMember({"linear", "ahu"}));
  common(nca);

  auto* mst = app.add_subcommand("mst", "Minimum spanning tree verification and construction");
  mst->require_subcommand(1);
  auto* verify = mst->add_subcommand("verify", "Check that a tree is a minimum spanning tree");
  verify->add_option("files", c.inputs, "Graph file and tree file")->required()->expected(2);
  common(verify);
  auto* build = mst->add_subcommand("build", "Randomized minimum spanning tree");
  build->add_option("graph", c.inputs, "Graph file")->required()->expected(1);
  build->add_option("--seed", c.seed, "Random seed");
  common(build);

  auto* iv = app.add_subcommand("intervals", "Interval heads of a flowgraph");
  iv->add_option("flow", c.inputs, "Flowgraph file")->required()->expected(1);
  iv->add_flag("--compressed", c.compressed, "Nearest core heads only");
  common(iv);

  auto* dom = app.add_subcommand("dominators", "Immediate dominators of a flowgraph");
  dom->add_option("flow", c.inputs, "Flowgraph file")->required()->expected(1);
  dom->add_option("--algo", c.algo, "linear, lt or naive")->check(CLI::IsMember({"linear", "lt", "naive"}));
  common(dom);

  auto* kr = app.add_subcommand("kruskal", "Kruskal tree of a tree with edges in weight order");
  kr->add_option("tree", c.inputs, "Ordered tree file")->required()->expected(1);
  kr->add_flag("--linear", c.linear, "Use precomputed finds");
  kr->add_option("--groups", c.groups, "Comma-separated sizes of equal-weight edge groups");
  common(kr);

  auto* bench = app.add_subcommand("bench", "Operation counters on random instances");
  std::vector<std::string> suite_names = bench_suites();
  suite_names.push_back("all");
  bench->add_option("--suite", c.suite, "Suite name or all")->required()->check(CLI::IsMember(suite_names));
  bench->add_option("--sizes", c.sizes, "Sizes such as 1k,2k,4k")->required();
  bench->add_option("--seed", c.seed, "Random seed");
  bench->add_flag("--stats", c.stats, "Write a summary row to stderr");
  bench->add_flag("--oracle", c.oracle, "Spot-check answers on the smallest size");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  if (!c.groups.empty() && c.linear) {
    err << "error: --groups and --linear cannot be combined\n";
    return 2;
  }

  try {
    if (nca->parsed()) detail::run_nca(c, out, err);
    else if (verify->parsed()) detail::run_mst_verify(c, out, err);
    else if (build->parsed()) detail::run_mst_build(c, out, err);
    else if (iv->parsed()) detail::run_intervals(c, out, err);
    else if (dom->parsed()) detail::run_dominators(c, out, err);
    else if (kr->parsed()) detail::run_kruskal(c, out, err);
    else if (bench->parsed()) detail::run_bench(c, out, err);
  } catch (const Mismatch& e) {
    err << "mismatch: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace treepath::cli
