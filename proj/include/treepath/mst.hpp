#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <tuple>
#include <vector>

#include "treepath/dsu.hpp"
#include "treepath/graphio.hpp"
#include "treepath/linkeval.hpp"
#include "treepath/nca.hpp"
#include "treepath/partition.hpp"
#include "treepath/topobatch.hpp"

namespace treepath {

/// Edge weight with its index as tie-breaker, so that all keys are distinct.
struct EdgeKey {
  double w = 0;
  std::uint32_t idx = 0;

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend bool operator<(const EdgeKey& a, const EdgeKey& b) { return a.w < b.w || (a.w == b.w && a.idx < b.idx); }
};

/// Orders keys ascending, or descending when `reversed` (for path minima).
struct KeyOrder {
  bool reversed = false;
  bool operator()(const EdgeKey& a, const EdgeKey& b) const { return reversed ? b < a : a < b; }
  EdgeKey lowest() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return reversed ? EdgeKey{inf, UINT32_MAX} : EdgeKey{-inf, 0};
  }
};

struct WeightedEdge {
  Vertex u = kNone;
  Vertex v = kNone;
  EdgeKey key;
};

/// Tree of components formed by Boruvka steps on a tree: leaves are the
/// original vertices 1..n; each node's arc to its parent carries the key of
/// the edge its component selected.
struct BoruvkaTree {
  std::size_t leaves = 0;
  Vertex root = kNone;
  std::vector<Vertex> parent;  // index 0 unused
  std::vector<EdgeKey> key;
  std::vector<std::uint32_t> pass;

  std::size_t size() const { return parent.size() - 1; }
};

inline BoruvkaTree boruvka_tree(std::size_t n, std::span<const WeightedEdge> edges, KeyOrder order = {}) {
  if (edges.size() + 1 != n) throw std::invalid_argument("boruvka_tree needs a tree");
  BoruvkaTree b;
  b.leaves = n;
  b.parent.assign(n + 1, kNone);
  b.key.assign(n + 1, order.lowest());
  b.pass.assign(n + 1, 0);
  std::vector<Vertex> node(n + 1);
  for (Vertex v = 1; v <= n; ++v) node[v] = v;
  struct E {
    Vertex a, b;
    EdgeKey key;
  };
  std::vector<E> cur;
  cur.reserve(edges.size());
  for (const WeightedEdge& e : edges) cur.push_back({e.u, e.v, e.key});
  std::size_t comps = n;
  std::uint32_t pass = 0;
  std::vector<std::uint32_t> best, adj_begin, adj;
  std::vector<Vertex> group;
  while (comps > 1) {
    ++pass;
    best.assign(comps + 1, UINT32_MAX);
    for (std::uint32_t i = 0; i < cur.size(); ++i)
      for (Vertex c : {cur[i].a, cur[i].b})
        if (best[c] == UINT32_MAX || order(cur[i].key, cur[best[c]].key)) best[c] = i;
    adj_begin.assign(comps + 2, 0);
    for (Vertex c = 1; c <= comps; ++c) {
      ++adj_begin[cur[best[c]].a + 1];
      ++adj_begin[cur[best[c]].b + 1];
    }
    for (std::size_t i = 1; i < adj_begin.size(); ++i) adj_begin[i] += adj_begin[i - 1];
    adj.resize(2 * comps);
    {
      std::vector<std::uint32_t> fill(adj_begin.begin(), adj_begin.end() - 1);
      for (Vertex c = 1; c <= comps; ++c) {
        const E& e = cur[best[c]];
        adj[fill[e.a]++] = e.b;
        adj[fill[e.b]++] = e.a;
      }
    }
    group.assign(comps + 1, kNone);
    std::vector<Vertex> next_node{kNone};
    std::vector<Vertex> stack;
    Vertex groups = 0;
    for (Vertex c = 1; c <= comps; ++c) {
      if (group[c] != kNone) continue;
      group[c] = ++groups;
      Vertex x = static_cast<Vertex>(b.parent.size());
      b.parent.push_back(kNone);
      b.key.push_back(order.lowest());
      b.pass.push_back(pass);
      next_node.push_back(x);
      stack.push_back(c);
      while (!stack.empty()) {
        Vertex y = stack.back();
        stack.pop_back();
        b.parent[node[y]] = x;
        b.key[node[y]] = cur[best[y]].key;
        for (std::uint32_t k = adj_begin[y]; k < adj_begin[y + 1]; ++k)
          if (group[adj[k]] == kNone) {
            group[adj[k]] = groups;
            stack.push_back(adj[k]);
          }
      }
    }
    std::size_t kept = 0;
    for (const E& e : cur)
      if (group[e.a] != group[e.b]) cur[kept++] = {group[e.a], group[e.b], e.key};
    cur.resize(kept);
    node = std::move(next_node);
    comps = groups;
  }
  b.root = node[1];
  return b;
}

struct PathMaxStats {
  std::uint64_t compress_nodes = 0;
  std::uint64_t small_queries = 0;
  std::uint64_t big_queries = 0;
  std::uint64_t work = 0;
  BatchCounters batch;
};

/// For each query (v, w), the largest key (under `order`) on the tree path
/// between v and w, or nullopt when v = w. Runs on the Boruvka tree: pairs
/// inside one microtree use per-query path lists shared across isomorphic
/// microtrees; the rest use Tarjan's postorder link-eval sweep.
inline std::vector<std::optional<EdgeKey>> path_maxima(std::size_t n, std::span<const WeightedEdge> edges,
                                                       std::span<const VertexPair> queries, std::size_t g,
                                                       KeyOrder order = {}, PathMaxStats* stats = nullptr) {
  std::vector<std::optional<EdgeKey>> answers(queries.size());
  BoruvkaTree b = boruvka_tree(n, edges, order);
  std::size_t nb = b.size();
  RootedTree bt(b.parent);
  TreePartition part = fringe_core(bt, g);
  auto better = [&](const EdgeKey& x, const EdgeKey& y) { return order(y, x); };

  std::vector<std::uint32_t> big;
  std::vector<std::vector<std::uint32_t>> small_of(nb + 1);
  for (std::uint32_t i = 0; i < queries.size(); ++i) {
    auto [v, w] = queries[i];
    if (v == w) continue;
    if (part.same_micro(v, w)) small_of[part.micro[v]].push_back(i);
    else big.push_back(i);
  }

  // Small pairs: the canonical instance yields, per query, the local nodes
  // whose parent arcs form the path; each member scans its own keys.
  TopoBatch batch(g, 1);
  std::vector<SmallInstance> instances;
  std::vector<Vertex> instance_root;
  for (Vertex s : part.micro_roots) {
    if (small_of[s].empty()) continue;
    SmallInstance inst = detail::subtree_instance(bt, s);
    inst.undirected = true;
    std::uint32_t base = bt.pre(s);
    for (std::uint32_t i : small_of[s])
      inst.arcs.push_back({bt.pre(queries[i].first) - base + 1, bt.pre(queries[i].second) - base + 1, 1});
    batch.add(inst);
    instances.push_back(std::move(inst));
    instance_root.push_back(s);
  }
  auto groups = batch.group();
  using Program = std::vector<std::vector<std::uint32_t>>;
  solve_and_transfer(
      groups,
      [&](std::uint32_t id) {
        const SmallInstance& inst = instances[id];
        auto parent = detail::local_parents(inst);
        std::vector<std::uint32_t> depth(parent.size(), 0);
        for (std::uint32_t x = 2; x < parent.size(); ++x) depth[x] = depth[parent[x]] + 1;
        Program prog;
        for (const LocalArc& a : inst.arcs) {
          if (a.label != 1) continue;
          std::vector<std::uint32_t> list;
          std::uint32_t x = a.tail, y = a.head;
          while (x != y) {
            if (depth[x] >= depth[y]) {
              list.push_back(x);
              x = parent[x];
            } else {
              list.push_back(y);
              y = parent[y];
            }
          }
          prog.push_back(std::move(list));
        }
        return prog;
      },
      [&](std::uint32_t id, const Program& prog) {
        Vertex s = instance_root[id];
        std::uint32_t base = bt.pre(s);
        const auto& qs = small_of[s];
        for (std::size_t k = 0; k < qs.size(); ++k) {
          EdgeKey m = order.lowest();
          for (std::uint32_t x : prog[k]) {
            const EdgeKey& c = b.key[bt.vertex_at(base + x - 1)];
            if (better(c, m)) m = c;
          }
          if (stats) stats->work += prog[k].size();
          answers[qs[k]] = m;
        }
      });

  // Big pairs: Tarjan's sweep with queries collected at their NCAs.
  std::vector<std::uint32_t> begin(nb + 2, 0);
  for (std::uint32_t i : big) {
    ++begin[queries[i].first + 1];
    ++begin[queries[i].second + 1];
  }
  for (std::size_t v = 1; v < begin.size(); ++v) begin[v] += begin[v - 1];
  std::vector<std::uint32_t> bucket(begin[nb + 1]);
  {
    std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
    for (std::uint32_t i : big) {
      bucket[fill[queries[i].first]++] = i;
      bucket[fill[queries[i].second]++] = i;
    }
  }
  std::vector<std::int64_t> qhead(nb + 1, -1), qnext(queries.size(), -1);
  std::vector<char> visited(nb + 1, 0);
  SimpleLinkEval<EdgeKey, decltype(better)> le(nb, order.lowest(), better);
  for (Vertex v : bt.postorder()) {
    for (std::uint32_t k = begin[v]; k < begin[v + 1]; ++k) {
      std::uint32_t i = bucket[k];
      Vertex w = queries[i].first == v ? queries[i].second : queries[i].first;
      if (!visited[w]) continue;
      Vertex u = le.findroot(w);
      qnext[i] = qhead[u];
      qhead[u] = i;
    }
    for (std::int64_t i = qhead[v]; i >= 0; i = qnext[i]) {
      EdgeKey x = le.eval(queries[i].first), y = le.eval(queries[i].second);
      answers[i] = better(y, x) ? y : x;
    }
    visited[v] = 1;
    if (bt.parent(v) != kNone) le.link(bt.parent(v), v, b.key[v]);
  }
  if (stats) {
    stats->compress_nodes += le.counters().compress_nodes;
    stats->big_queries += big.size();
    for (Vertex s : part.micro_roots) stats->small_queries += small_of[s].size();
    stats->work += nb + queries.size() + le.counters().compress_nodes + batch.counters().tokens + batch.counters().sort_work;
    stats->batch.instances += batch.counters().instances;
    stats->batch.tokens += batch.counters().tokens;
    stats->batch.sort_work += batch.counters().sort_work;
    stats->batch.groups += batch.counters().groups;
  }
  return answers;
}

namespace detail {

inline std::vector<WeightedEdge> keyed_edges(const Digraph& g) {
  std::vector<WeightedEdge> out;
  out.reserve(g.arcs.size());
  for (std::uint32_t i = 0; i < g.arcs.size(); ++i) {
    if (!g.arcs[i].w) throw Error("edge " + std::to_string(i + 1) + " has no weight");
    out.push_back({g.arcs[i].u, g.arcs[i].v, {*g.arcs[i].w, i}});
  }
  return out;
}

/// Minimum spanning forest by Kruskal; returns positions into `edges`.
inline std::vector<std::uint32_t> kruskal_forest(std::size_t n, std::span<const WeightedEdge> edges) {
  std::vector<std::uint32_t> order(edges.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return edges[a].key < edges[b].key; });
  DisjointSets dsu(std::max<std::size_t>(n, 1));
  std::vector<std::uint32_t> out;
  for (std::uint32_t i : order) {
    Vertex a = dsu.find(edges[i].u), b = dsu.find(edges[i].v);
    if (a == b) continue;
    dsu.unite(a, b);
    out.push_back(i);
  }
  return out;
}

struct KktContext {
  std::uint64_t work = 0;
  PathMaxStats path;
};

/// Randomized minimum spanning forest (Karger-Klein-Tarjan) on vertices
/// 1..n; returns positions into `edges`.
inline std::vector<std::uint32_t> kkt_forest(std::size_t n, const std::vector<WeightedEdge>& edges, std::uint64_t seed,
                                             KktContext& ctx) {
  ctx.work += n + edges.size();
  if (edges.size() <= 16) return kruskal_forest(n, edges);

  std::vector<std::uint32_t> result;
  std::vector<WeightedEdge> cur = edges;
  std::vector<std::uint32_t> origin(edges.size());
  for (std::uint32_t i = 0; i < origin.size(); ++i) origin[i] = i;
  std::size_t nv = n;

  for (int step = 0; step < 2 && !cur.empty(); ++step) {
    std::vector<std::uint32_t> best(nv + 1, UINT32_MAX);
    for (std::uint32_t i = 0; i < cur.size(); ++i)
      if (cur[i].u != cur[i].v)
        for (Vertex c : {cur[i].u, cur[i].v})
          if (best[c] == UINT32_MAX || cur[i].key < cur[best[c]].key) best[c] = i;
    std::vector<char> chosen(cur.size(), 0);
    std::vector<std::uint32_t> adj_begin(nv + 2, 0), adj;
    for (Vertex c = 1; c <= nv; ++c)
      if (best[c] != UINT32_MAX && !chosen[best[c]]) {
        chosen[best[c]] = 1;
        result.push_back(origin[best[c]]);
        ++adj_begin[cur[best[c]].u + 1];
        ++adj_begin[cur[best[c]].v + 1];
      }
    for (std::size_t i = 1; i < adj_begin.size(); ++i) adj_begin[i] += adj_begin[i - 1];
    adj.resize(adj_begin[nv + 1]);
    {
      std::vector<std::uint32_t> fill(adj_begin.begin(), adj_begin.end() - 1);
      for (std::uint32_t i = 0; i < cur.size(); ++i)
        if (chosen[i]) {
          adj[fill[cur[i].u]++] = cur[i].v;
          adj[fill[cur[i].v]++] = cur[i].u;
        }
    }
    std::vector<Vertex> label(nv + 1, kNone), stack;
    Vertex comps = 0;
    for (Vertex c = 1; c <= nv; ++c) {
      if (label[c] != kNone) continue;
      label[c] = ++comps;
      stack.push_back(c);
      while (!stack.empty()) {
        Vertex y = stack.back();
        stack.pop_back();
        for (std::uint32_t k = adj_begin[y]; k < adj_begin[y + 1]; ++k)
          if (label[adj[k]] == kNone) {
            label[adj[k]] = comps;
            stack.push_back(adj[k]);
          }
      }
    }
    std::size_t kept = 0;
    for (std::uint32_t i = 0; i < cur.size(); ++i) {
      Vertex a = label[cur[i].u], b = label[cur[i].v];
      if (a == b) continue;
      origin[kept] = origin[i];
      cur[kept++] = {a, b, cur[i].key};
    }
    cur.resize(kept);
    origin.resize(kept);
    nv = comps;
    ctx.work += nv + cur.size();
  }
  if (cur.empty()) return result;

  std::mt19937_64 rng(seed);
  std::vector<WeightedEdge> sample;
  std::vector<std::uint32_t> sample_pos;
  std::uint64_t bits = 0;
  for (std::uint32_t i = 0; i < cur.size(); ++i) {
    if (i % 64 == 0) bits = rng();
    bool keep = (bits >> (i % 64)) & 1;
    if (!keep) continue;
    sample.push_back(cur[i]);
    sample_pos.push_back(i);
  }
  auto f = kkt_forest(nv, sample, splitmix64(seed ^ 0x5a5a5a5aULL), ctx);

  // Make the sampled forest a tree by hanging every component from a new
  // vertex, then drop edges heavier than their forest path maximum.
  std::vector<Vertex> comp(nv + 1, kNone);
  DisjointSets dsu(nv + 1);
  std::vector<WeightedEdge> tree;
  tree.reserve(nv);
  for (std::uint32_t p : f) {
    const WeightedEdge& e = sample[p];
    dsu.unite_any(e.u, e.v);
    tree.push_back(e);
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vertex hub = static_cast<Vertex>(nv + 1);
  std::uint32_t spare = UINT32_MAX;
  for (Vertex c = 1; c <= nv; ++c)
    if (dsu.find(c) == c && dsu.is_designated(c)) tree.push_back({hub, c, {inf, spare--}});
  for (Vertex c = 1; c <= nv; ++c) comp[c] = dsu.find(c);
  std::vector<VertexPair> q;
  std::vector<std::uint32_t> q_edge;
  std::vector<WeightedEdge> light;
  std::vector<std::uint32_t> light_pos;
  for (std::uint32_t i = 0; i < cur.size(); ++i) {
    if (comp[cur[i].u] != comp[cur[i].v]) {
      light.push_back(cur[i]);
      light_pos.push_back(i);
    } else {
      q.emplace_back(cur[i].u, cur[i].v);
      q_edge.push_back(i);
    }
  }
  auto pm = path_maxima(nv + 1, tree, q, default_g(nv + 1), {}, &ctx.path);
  for (std::size_t k = 0; k < q.size(); ++k) {
    std::uint32_t i = q_edge[k];
    if (pm[k] && *pm[k] < cur[i].key) continue;
    light.push_back(cur[i]);
    light_pos.push_back(i);
  }
  auto rest = kkt_forest(nv, light, splitmix64(seed ^ 0xa5a5a5a5ULL), ctx);
  for (std::uint32_t p : rest) result.push_back(origin[light_pos[p]]);
  return result;
}

}  // namespace detail

struct MstStats {
  std::uint64_t work = 0;
  std::uint64_t compress_nodes = 0;
};

/// Minimum spanning tree by the randomized linear-expected-time method.
/// Returns edge indices (into g.arcs) in increasing order.
inline std::vector<std::uint32_t> build_mst_kkt(const Digraph& g, std::uint64_t seed, MstStats* stats = nullptr) {
  auto edges = detail::keyed_edges(g);
  std::vector<Vertex> discovered;
  detail::dfs_parents(g.n, g.arcs, 1, true, discovered, nullptr);
  if (discovered.size() != g.n) throw Error("graph is not connected");
  detail::KktContext ctx;
  auto pos = detail::kkt_forest(g.n, edges, seed, ctx);
  std::sort(pos.begin(), pos.end());
  if (stats) {
    stats->work += ctx.work + ctx.path.work;
    stats->compress_nodes += ctx.path.compress_nodes;
  }
  return pos;
}

/// Kruskal's algorithm with (weight, index) tie-breaking; edge indices sorted.
inline std::vector<std::uint32_t> kruskal_mst(const Digraph& g) {
  auto edges = detail::keyed_edges(g);
  auto pos = detail::kruskal_forest(g.n, edges);
  if (pos.size() + 1 != g.n) throw Error("graph is not connected");
  std::sort(pos.begin(), pos.end());
  return pos;
}

struct VerifyResult {
  bool minimum = true;
  std::optional<std::uint32_t> violation;  // index into g.arcs
};

/// Checks whether tree `t` is a minimum spanning tree of `g`: every nontree
/// edge must weigh at least the maximum on the tree path between its ends.
/// Tree edges are matched to graph edges by endpoints and weight.
inline VerifyResult verify_mst(const Digraph& g, const Digraph& t, std::optional<std::size_t> g_override = {},
                               PathMaxStats* stats = nullptr) {
  if (t.n != g.n || t.arcs.size() + 1 != t.n) throw Error("t is not a spanning tree of g");
  auto gedges = detail::keyed_edges(g);
  std::map<std::tuple<Vertex, Vertex, double>, std::vector<std::uint32_t>> pool;
  for (std::uint32_t i = gedges.size(); i-- > 0;) {
    auto [u, v, k] = gedges[i];
    pool[{std::min(u, v), std::max(u, v), k.w}].push_back(i);
  }
  std::vector<char> in_tree(gedges.size(), 0);
  std::vector<WeightedEdge> tree;
  for (const Arc& a : t.arcs) {
    if (!a.w) throw Error("tree edge has no weight");
    auto it = pool.find({std::min(a.u, a.v), std::max(a.u, a.v), *a.w});
    if (it == pool.end() || it->second.empty()) throw Error("t is not a spanning tree of g: edge not in g");
    std::uint32_t i = it->second.back();
    it->second.pop_back();
    in_tree[i] = 1;
    tree.push_back(gedges[i]);
  }
  std::vector<Vertex> discovered;
  std::vector<Arc> tarcs(t.arcs.begin(), t.arcs.end());
  detail::dfs_parents(t.n, tarcs, 1, true, discovered, nullptr);
  if (discovered.size() != t.n) throw Error("t is not a spanning tree of g: disconnected");

  std::vector<VertexPair> q;
  std::vector<std::uint32_t> q_edge;
  for (std::uint32_t i = 0; i < gedges.size(); ++i)
    if (!in_tree[i]) {
      q.emplace_back(gedges[i].u, gedges[i].v);
      q_edge.push_back(i);
    }
  auto pm = path_maxima(g.n, tree, q, g_override.value_or(default_g(g.n)), {}, stats);
  VerifyResult r;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (pm[k] && gedges[q_edge[k]].key.w < pm[k]->w) {
      r.minimum = false;
      r.violation = q_edge[k];
      break;
    }
  return r;
}

}  // namespace treepath
