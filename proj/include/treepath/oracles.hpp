#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "treepath/graphio.hpp"
#include "treepath/kruskal.hpp"
#include "treepath/mst.hpp"

/// Brute-force reference implementations used by tests and `--oracle` runs.
namespace treepath::oracle {

/// NCA by intersecting root paths.
inline std::vector<Vertex> nca(const RootedTree& t, std::span<const VertexPair> q) {
  std::vector<Vertex> out;
  std::vector<char> mark(t.n() + 1, 0);
  for (auto [v, w] : q) {
    for (Vertex x = v; x != kNone; x = t.parent(x)) mark[x] = 1;
    Vertex y = w;
    while (!mark[y]) y = t.parent(y);
    out.push_back(y);
    for (Vertex x = v; x != kNone; x = t.parent(x)) mark[x] = 0;
  }
  return out;
}

/// Largest key on each tree path by walking both endpoints up to their NCA.
inline std::vector<std::optional<EdgeKey>> path_maxima(std::size_t n, std::span<const WeightedEdge> edges,
                                                       std::span<const VertexPair> q) {
  std::vector<std::vector<std::pair<Vertex, EdgeKey>>> adj(n + 1);
  for (const auto& e : edges) {
    adj[e.u].emplace_back(e.v, e.key);
    adj[e.v].emplace_back(e.u, e.key);
  }
  std::vector<Vertex> parent(n + 1, kNone), depth(n + 1, 0), stack{1};
  std::vector<EdgeKey> up(n + 1);
  std::vector<char> seen(n + 1, 0);
  seen[1] = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (auto [y, k] : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        parent[y] = x;
        depth[y] = depth[x] + 1;
        up[y] = k;
        stack.push_back(y);
      }
  }
  std::vector<std::optional<EdgeKey>> out;
  for (auto [v, w] : q) {
    std::optional<EdgeKey> best;
    auto take = [&](Vertex& x) {
      if (!best || *best < up[x]) best = up[x];
      x = parent[x];
    };
    while (v != w) {
      if (depth[v] >= depth[w]) take(v);
      else take(w);
    }
    out.push_back(best);
  }
  return out;
}

/// Interval heads straight from the definition: h(v) is the largest proper
/// ancestor u of v such that v reaches u through descendants of u.
inline std::vector<Vertex> interval_heads(const Digraph& g) {
  DfsResult d = dfs_preorder(g);
  std::size_t n = g.n;
  std::vector<std::vector<Vertex>> pred(n + 1);
  for (const Arc& a : g.arcs) pred[a.v].push_back(a.u);
  std::vector<Vertex> by_pre(n + 1);
  for (Vertex v = 1; v <= n; ++v) by_pre[d.tree.pre(v)] = v;
  std::vector<Vertex> h(n + 1, kNone);
  std::vector<char> seen(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    Vertex u = by_pre[i];
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<Vertex> stack{u};
    seen[u] = 1;
    while (!stack.empty()) {
      Vertex y = stack.back();
      stack.pop_back();
      for (Vertex x : pred[y])
        if (!seen[x] && d.tree.ancestor(u, x)) {
          seen[x] = 1;
          stack.push_back(x);
        }
    }
    for (Vertex v = 1; v <= n; ++v)
      if (v != u && seen[v]) h[v] = u;
  }
  return h;
}

/// Nearest ancestor in the interval forest `h` satisfying `keep`, or 0.
template <class Keep>
std::vector<Vertex> compress_heads(std::span<const Vertex> h, Keep&& keep) {
  std::vector<Vertex> out(h.size(), kNone);
  for (Vertex v = 1; v < h.size(); ++v) {
    Vertex u = h[v];
    while (u != kNone && !keep(u)) u = h[u];
    out[v] = u;
  }
  return out;
}

/// Semi-dominators in preorder numbers from the high-path definition; the
/// root is its own semi-dominator.
inline std::vector<Vertex> semidominators(const PreorderGraph& pg) {
  std::size_t n = pg.n;
  std::vector<std::vector<Vertex>> pred(n + 1);
  for (auto [u, v] : pg.arcs) pred[v].push_back(u);
  std::vector<Vertex> sdom(n + 1, kNone);
  if (n >= 1) sdom[1] = 1;
  std::vector<char> seen(n + 1);
  for (Vertex w = 2; w <= n; ++w) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<Vertex> stack{w};
    seen[w] = 1;
    Vertex best = w;
    while (!stack.empty()) {
      Vertex y = stack.back();
      stack.pop_back();
      for (Vertex x : pred[y]) {
        if (x < w) best = std::min(best, x);
        else if (x > w && !seen[x]) {
          seen[x] = 1;
          stack.push_back(x);
        }
      }
    }
    sdom[w] = best;
  }
  return sdom;
}

/// Immediate dominators in original ids by vertex removal.
inline std::vector<Vertex> dominators(const Digraph& g) {
  std::size_t n = g.n;
  std::vector<std::vector<Vertex>> succ(n + 1);
  for (const Arc& a : g.arcs) succ[a.u].push_back(a.v);
  auto reach = [&](Vertex removed) {
    std::vector<char> seen(n + 1, 0);
    if (removed == g.root) return seen;
    std::vector<Vertex> stack{g.root};
    seen[g.root] = 1;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : succ[x])
        if (y != removed && !seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    return seen;
  };
  std::vector<std::vector<char>> dom(n + 1, std::vector<char>(n + 1, 0));  // dom[w][v]: v dominates w
  for (Vertex v = 1; v <= n; ++v) {
    auto seen = reach(v);
    for (Vertex w = 1; w <= n; ++w)
      if (!seen[w]) dom[w][v] = 1;
  }
  std::vector<std::uint32_t> count(n + 1, 0);
  for (Vertex w = 1; w <= n; ++w)
    for (Vertex v = 1; v <= n; ++v) count[w] += dom[w][v];
  std::vector<Vertex> idom(n + 1, kNone);
  for (Vertex w = 1; w <= n; ++w) {
    if (w == g.root) continue;
    for (Vertex v = 1; v <= n; ++v)
      if (v != w && dom[w][v] && count[v] + 1 == count[w]) idom[w] = v;
  }
  return idom;
}

/// Kruskal tree by relabeling components: the left child is the component of
/// the endpoint nearer vertex 1.
inline KruskalTree kruskal_tree(const Digraph& t) {
  std::size_t n = t.n;
  std::vector<std::vector<Vertex>> adj(n + 1);
  for (const Arc& a : t.arcs) {
    adj[a.u].push_back(a.v);
    adj[a.v].push_back(a.u);
  }
  std::vector<std::uint32_t> depth(n + 1, 0);
  std::vector<char> seen(n + 1, 0);
  std::vector<Vertex> stack{1};
  seen[1] = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (Vertex y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        depth[y] = depth[x] + 1;
        stack.push_back(y);
      }
  }
  KruskalTree k;
  k.n = n;
  std::size_t nodes = n == 1 ? 1 : 2 * n - 1;
  k.left.assign(nodes + 1, kNone);
  k.right.assign(nodes + 1, kNone);
  k.parent.assign(nodes + 1, kNone);
  std::vector<std::uint32_t> comp(n + 1);
  std::vector<Vertex> top(n + 1);
  for (Vertex v = 1; v <= n; ++v) comp[v] = top[v] = v;
  for (std::size_t i = 0; i < t.arcs.size(); ++i) {
    auto [a, b, w] = t.arcs[i];
    if (depth[a] > depth[b]) std::swap(a, b);
    std::uint32_t ca = comp[a], cb = comp[b];
    auto id = static_cast<Vertex>(n + i + 1);
    k.left[id] = top[ca];
    k.right[id] = top[cb];
    k.parent[top[ca]] = k.parent[top[cb]] = id;
    top[ca] = id;
    for (Vertex v = 1; v <= n; ++v)
      if (comp[v] == cb) comp[v] = ca;
  }
  return k;
}

/// Leaf set of every node of a rooted tree given by child lists.
inline std::vector<std::set<Vertex>> leaf_sets(std::size_t n, const std::vector<std::vector<Vertex>>& children) {
  std::vector<std::set<Vertex>> leaves(children.size());
  for (Vertex v = 1; v <= n; ++v) leaves[v] = {v};
  for (std::size_t x = n + 1; x < children.size(); ++x)
    for (Vertex c : children[x]) leaves[x].insert(leaves[c].begin(), leaves[c].end());
  return leaves;
}

/// Checks a compressed Kruskal tree against prefix-union components: the
/// nodes of group j are exactly the components after group j that contain a
/// group-j edge, and children are listed before their parents.
inline bool compressed_kruskal_ok(const Digraph& t, std::span<const std::uint32_t> group_sizes,
                                  const CompressedKruskalTree& c) {
  std::size_t n = t.n;
  std::vector<std::vector<Vertex>> children(n + 1);
  for (const auto& ch : c.children) {
    for (Vertex x : ch)
      if (x == kNone || x >= children.size()) return false;
    children.push_back(ch);
  }
  auto leaves = leaf_sets(n, children);
  std::map<std::uint32_t, std::set<std::set<Vertex>>> got;
  for (std::size_t i = 0; i < c.group.size(); ++i) got[c.group[i]].insert(leaves[n + 1 + i]);

  std::vector<std::uint32_t> comp(n + 1);
  for (Vertex v = 1; v <= n; ++v) comp[v] = v;
  std::size_t e = 0;
  for (std::uint32_t j = 1; j <= group_sizes.size(); ++j) {
    std::vector<Vertex> touched;
    for (std::uint32_t s = 0; s < group_sizes[j - 1]; ++s, ++e) {
      std::uint32_t ca = comp[t.arcs[e].u], cb = comp[t.arcs[e].v];
      for (Vertex v = 1; v <= n; ++v)
        if (comp[v] == cb) comp[v] = ca;
      touched.push_back(t.arcs[e].u);
    }
    std::set<std::set<Vertex>> want;
    for (Vertex x : touched) {
      std::set<Vertex> members;
      for (Vertex v = 1; v <= n; ++v)
        if (comp[v] == comp[x]) members.insert(v);
      want.insert(members);
    }
    if (got[j] != want) return false;
  }
  return true;
}

/// A spanning tree is minimum iff its sorted weights match a Kruskal tree's.
inline bool is_minimum(const Digraph& g, const Digraph& t) {
  std::vector<double> a, b;
  for (const Arc& x : t.arcs) a.push_back(*x.w);
  for (std::uint32_t i : kruskal_mst(g)) b.push_back(*g.arcs[i].w);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace treepath::oracle
