#pragma once

#include <bit>
#include <optional>
#include <span>
#include <vector>

#include "treepath/dsu.hpp"
#include "treepath/graphio.hpp"
#include "treepath/nca.hpp"
#include "treepath/partition.hpp"
#include "treepath/topobatch.hpp"

namespace treepath {

/// Binary component tree: leaves 1..n, internal nodes n+1..2n-1 in edge
/// order. Node n+i is formed by edge i (1-based).
struct KruskalTree {
  std::size_t n = 0;
  std::vector<Vertex> left, right;  // indexed by node id; leaves have none
  std::vector<Vertex> parent;

  Vertex root() const { return static_cast<Vertex>(n == 1 ? 1 : 2 * n - 1); }
  std::uint32_t edge(Vertex k) const { return static_cast<std::uint32_t>(k - n); }
  friend bool operator==(const KruskalTree&, const KruskalTree&) = default;
};

struct KruskalStats {
  std::uint64_t live_finds = 0;
  std::uint64_t cached_finds = 0;
  std::uint64_t find_path_nodes = 0;
  BatchCounters batch;
};

namespace detail {

/// Child endpoint of each edge when the tree is rooted at 1.
inline std::vector<Vertex> edge_children(const RootedTree& t, std::span<const VertexPair> edges) {
  if (edges.size() + 1 != t.n()) throw Error("edge order must list every tree edge once");
  std::vector<Vertex> child(edges.size());
  std::vector<char> used(t.n() + 1, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [a, b] = edges[i];
    Vertex x = t.parent(b) == a ? b : t.parent(a) == b ? a : kNone;
    if (x == kNone) throw Error("edge " + std::to_string(i + 1) + " is not a tree edge");
    if (used[x]) throw Error("edge " + std::to_string(i + 1) + " listed twice");
    used[x] = 1;
    child[i] = x;
  }
  return child;
}

inline KruskalTree empty_kruskal(std::size_t n) {
  KruskalTree k;
  k.n = n;
  std::size_t nodes = n == 1 ? 1 : 2 * n - 1;
  k.left.assign(nodes + 1, kNone);
  k.right.assign(nodes + 1, kNone);
  k.parent.assign(nodes + 1, kNone);
  return k;
}

/// Runs the edge sweep; `cached(x)` returns the precomputed find(p(x)) or kNone.
template <class Cached>
KruskalTree kruskal_sweep(const RootedTree& t, std::span<const Vertex> child, Cached&& cached, KruskalStats* stats) {
  std::size_t n = t.n();
  KruskalTree k = empty_kruskal(n);
  DisjointSets dsu(n);
  std::vector<Vertex> node(n + 1);
  for (Vertex v = 1; v <= n; ++v) node[v] = v;
  for (std::size_t i = 0; i < child.size(); ++i) {
    Vertex x = child[i];
    Vertex u = cached(x);
    if (u == kNone) u = dsu.find(t.parent(x));
    else if (stats) ++stats->cached_finds;
    auto id = static_cast<Vertex>(n + i + 1);
    k.left[id] = node[u];
    k.right[id] = node[x];
    k.parent[node[u]] = k.parent[node[x]] = id;
    node[u] = id;
    dsu.unite(u, x);
  }
  if (stats) {
    stats->live_finds += dsu.finds();
    stats->find_path_nodes += dsu.find_path_nodes();
  }
  return k;
}

}  // namespace detail

/// Kruskal tree of a tree rooted at 1, edges given in weight order.
inline KruskalTree kruskal_tree(const RootedTree& t, std::span<const VertexPair> edges, KruskalStats* stats = nullptr) {
  auto child = detail::edge_children(t, edges);
  return detail::kruskal_sweep(t, child, [](Vertex) { return kNone; }, stats);
}

/// Same tree, with the finds that stay inside a microtree of the full
/// partition precomputed by a batched topological computation.
inline KruskalTree kruskal_tree_linear(const RootedTree& t, std::span<const VertexPair> edges, std::size_t g,
                                       KruskalStats* stats = nullptr) {
  std::size_t n = t.n();
  auto child = detail::edge_children(t, edges);
  std::vector<std::uint32_t> num(n + 1, static_cast<std::uint32_t>(n));
  for (std::size_t i = 0; i < child.size(); ++i) num[child[i]] = static_cast<std::uint32_t>(i + 1);

  FullPartition part = full_partition(t, g);
  std::vector<std::uint32_t> index(n + 1, 0), local(n + 1, 0);
  for (std::uint32_t k = 0; k < part.roots.size(); ++k) index[part.roots[k]] = k;
  std::vector<std::vector<Vertex>> members(part.roots.size());
  for (std::size_t i = 1; i <= n; ++i) {
    Vertex v = t.vertex_at(i);
    auto& m = members[index[part.micro[v]]];
    m.push_back(v);
    local[v] = static_cast<std::uint32_t>(m.size());
  }
  std::vector<std::uint32_t> group(n), value(n);
  for (Vertex v = 1; v <= n; ++v) {
    group[v - 1] = index[part.micro[v]];
    value[v - 1] = num[v];
  }
  auto rank = rank_within_groups(group, value, part.roots.size(), n);

  TopoBatch batch(g, static_cast<unsigned>(std::bit_width(g)));
  std::vector<SmallInstance> instances;
  instances.reserve(part.roots.size());
  for (const auto& m : members) {
    SmallInstance inst;
    for (Vertex v : m) {
      inst.labels.push_back(rank[v - 1]);
      if (v != m.front()) inst.arcs.push_back({local[t.parent(v)], local[v], 0});
    }
    batch.add(inst);
    instances.push_back(std::move(inst));
  }
  std::vector<Vertex> f(n + 1, kNone);
  solve_and_transfer(
      batch.group(),
      [&](std::uint32_t id) {
        const SmallInstance& inst = instances[id];
        auto parent = detail::local_parents(inst);
        std::vector<std::uint32_t> out(inst.vertex_count() + 1, 0);
        for (std::uint32_t x = 2; x <= inst.vertex_count(); ++x) {
          std::uint32_t y = parent[x];
          while (y != 0 && inst.labels[y - 1] <= inst.labels[x - 1]) y = parent[y];
          out[x] = y;
        }
        return out;
      },
      [&](std::uint32_t id, const std::vector<std::uint32_t>& out) {
        const auto& m = members[id];
        for (std::uint32_t x = 2; x < out.size(); ++x)
          if (out[x]) f[m[x - 1]] = m[out[x] - 1];
      });
  if (stats) {
    const BatchCounters& c = batch.counters();
    stats->batch.instances += c.instances;
    stats->batch.tokens += c.tokens;
    stats->batch.sort_work += c.sort_work;
    stats->batch.groups += c.groups;
  }
  return detail::kruskal_sweep(t, child, [&](Vertex x) { return f[x]; }, stats);
}

/// Kruskal tree with equal-weight groups merged: node ids n+1.. follow the
/// order of the binary nodes they replace.
struct CompressedKruskalTree {
  std::size_t n = 0;
  std::vector<std::uint32_t> group;            // per internal node, 1-based
  std::vector<std::vector<Vertex>> children;   // per internal node

  Vertex first_internal() const { return static_cast<Vertex>(n + 1); }
  std::size_t size() const { return n + group.size(); }
};

/// `group_sizes` splits the edge order into consecutive equal-weight groups.
inline CompressedKruskalTree compressed_kruskal(const RootedTree& t, std::span<const VertexPair> edges,
                                                std::span<const std::uint32_t> group_sizes) {
  std::size_t n = t.n();
  std::vector<std::uint32_t> edge_group;
  for (std::size_t gi = 0; gi < group_sizes.size(); ++gi) {
    if (group_sizes[gi] == 0) throw Error("empty edge group");
    edge_group.insert(edge_group.end(), group_sizes[gi], static_cast<std::uint32_t>(gi + 1));
  }
  if (edge_group.size() != edges.size()) throw Error("group sizes must add up to the edge count");
  KruskalTree k = kruskal_tree(t, edges);
  std::size_t nodes = k.parent.size() - 1;

  std::vector<Vertex> rep(nodes + 1, kNone);
  for (Vertex x = static_cast<Vertex>(nodes); x > n; --x) {
    Vertex p = k.parent[x];
    rep[x] = p != kNone && edge_group[p - n - 1] == edge_group[x - n - 1] ? rep[p] : x;
  }
  std::vector<Vertex> new_id(nodes + 1, kNone);
  CompressedKruskalTree c;
  c.n = n;
  for (Vertex x = static_cast<Vertex>(n + 1); x <= nodes; ++x)
    if (rep[x] == x) {
      new_id[x] = static_cast<Vertex>(n + 1 + c.group.size());
      c.group.push_back(edge_group[x - n - 1]);
    }
  for (Vertex v = 1; v <= n; ++v) new_id[v] = v;
  c.children.resize(c.group.size());
  std::vector<Vertex> stack;
  for (Vertex x = static_cast<Vertex>(n + 1); x <= nodes; ++x) {
    if (rep[x] != x) continue;
    auto& out = c.children[new_id[x] - n - 1];
    stack.assign(1, x);
    while (!stack.empty()) {
      Vertex y = stack.back();
      stack.pop_back();
      if (y > n && rep[y] == x) {
        stack.push_back(k.right[y]);
        stack.push_back(k.left[y]);
      } else {
        out.push_back(new_id[y]);
      }
    }
  }
  return c;
}

}  // namespace treepath
