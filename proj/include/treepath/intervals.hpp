#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "treepath/dsu.hpp"
#include "treepath/graphio.hpp"
#include "treepath/nca.hpp"
#include "treepath/partition.hpp"
#include "treepath/topobatch.hpp"

namespace treepath {

struct IntervalStats {
  std::uint64_t finds = 0;
  std::uint64_t find_path_nodes = 0;
  std::uint64_t bag_pops = 0;
  NcaStats nca;
  BatchCounters batch;
};

namespace detail {

/// Per-vertex singly linked bags with O(1) push, pop and splice.
class Bags {
 public:
  Bags(std::size_t n, std::size_t capacity) : head_(n + 1, -1), tail_(n + 1, -1) {
    item_.reserve(capacity);
    next_.reserve(capacity);
  }

  bool empty(Vertex v) const { return head_[v] < 0; }

  void push(Vertex v, Vertex x) {
    auto id = static_cast<std::int64_t>(item_.size());
    item_.push_back(x);
    next_.push_back(head_[v]);
    if (head_[v] < 0) tail_[v] = id;
    head_[v] = id;
  }

  Vertex pop(Vertex v) {
    std::int64_t id = head_[v];
    head_[v] = next_[id];
    if (head_[v] < 0) tail_[v] = -1;
    return item_[id];
  }

  /// Moves the contents of src to the front of dst.
  void splice(Vertex dst, Vertex src) {
    if (src == dst || head_[src] < 0) return;
    next_[tail_[src]] = head_[dst];
    if (head_[dst] < 0) tail_[dst] = tail_[src];
    head_[dst] = head_[src];
    head_[src] = tail_[src] = -1;
  }

 private:
  std::vector<std::int64_t> head_, tail_, next_;
  std::vector<Vertex> item_;
};

/// Strongly connected components of the graph on 1..n (iterative Tarjan).
/// Components are numbered from 1 in completion order, so every arc between
/// components goes from a higher number to a lower one.
inline std::vector<std::uint32_t> strong_components(std::size_t n, std::span<const VertexPair> arcs) {
  std::vector<std::uint32_t> begin(n + 2, 0), adj(arcs.size());
  for (auto [u, v] : arcs) ++begin[u + 1];
  for (std::size_t i = 1; i < begin.size(); ++i) begin[i] += begin[i - 1];
  {
    std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
    for (auto [u, v] : arcs) adj[fill[u]++] = v;
  }
  std::vector<std::uint32_t> index(n + 1, 0), low(n + 1, 0), comp(n + 1, 0);
  std::vector<Vertex> stack;
  std::vector<std::pair<Vertex, std::uint32_t>> call;
  std::uint32_t next_index = 0, next_comp = 0;
  for (Vertex s = 1; s <= n; ++s) {
    if (index[s]) continue;
    call.emplace_back(s, begin[s]);
    index[s] = low[s] = ++next_index;
    stack.push_back(s);
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < begin[v + 1]) {
        Vertex w = adj[pos++];
        if (!index[w]) {
          index[w] = low[w] = ++next_index;
          stack.push_back(w);
          call.emplace_back(w, begin[w]);
        } else if (!comp[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      Vertex done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        ++next_comp;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          comp[w] = next_comp;
        } while (w != done);
      }
    }
  }
  return comp;
}

/// Heads of a small flowgraph instance by backward search inside each D(u),
/// for u in increasing order, so the largest head wins.
inline std::vector<std::uint32_t> local_heads(const SmallInstance& inst) {
  std::uint32_t cnt = inst.vertex_count();
  auto parent = local_parents(inst);
  std::vector<std::uint32_t> size(cnt + 1, 1);
  for (std::uint32_t x = cnt; x >= 2; --x) size[parent[x]] += size[x];
  std::vector<std::vector<std::uint32_t>> radj(cnt + 1);
  for (const LocalArc& a : inst.arcs) radj[a.head].push_back(a.tail);
  std::vector<std::uint32_t> h(cnt + 1, 0), seen(cnt + 1, 0), queue;
  for (std::uint32_t u = 1; u <= cnt; ++u) {
    queue.assign(1, u);
    seen[u] = u;
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (std::uint32_t y : radj[queue[k]])
        if (y >= u && y < u + size[u] && seen[y] != u) {
          seen[y] = u;
          h[y] = u;
          queue.push_back(y);
        }
  }
  return h;
}

/// Runs the path-by-path phase on the core. `dsu` holds the fringe
/// contractions; h receives the heads of every vertex designated on entry
/// whose head lies in the core.
inline void interval_core(const PreorderGraph& pg, const TreePartition& part, DisjointSets& dsu, std::vector<Vertex>& h,
                          IntervalStats* stats) {
  std::size_t n = pg.n;
  const RootedTree& t = pg.tree;
  Bags bags(n, pg.arcs.size());

  std::vector<Vertex> nca_of(pg.arcs.size(), kNone);
  std::vector<VertexPair> cross;
  std::vector<std::uint32_t> cross_arc;
  for (std::uint32_t i = 0; i < pg.arcs.size(); ++i) {
    auto [x, y] = pg.arcs[i];
    if (part.same_micro(x, y)) {
      bags.push(dsu.find(y), x);
      continue;
    }
    switch (pg.classes[i]) {
      case ArcClass::tree:
      case ArcClass::forward: nca_of[i] = x; break;
      case ArcClass::back: nca_of[i] = y; break;
      case ArcClass::cross:
        cross.emplace_back(x, y);
        cross_arc.push_back(i);
        break;
    }
  }
  auto answers = nca_ahu(t, cross, stats ? &stats->nca : nullptr);
  for (std::size_t k = 0; k < cross.size(); ++k) nca_of[cross_arc[k]] = answers[k];

  std::vector<std::uint32_t> begin(n + 2, 0), bucket;
  for (Vertex u : nca_of)
    if (u != kNone) ++begin[u + 1];
  for (std::size_t i = 1; i < begin.size(); ++i) begin[i] += begin[i - 1];
  bucket.resize(begin[n + 1]);
  {
    std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
    for (std::uint32_t i = 0; i < nca_of.size(); ++i)
      if (nca_of[i] != kNone) bucket[fill[nca_of[i]]++] = i;
  }

  std::vector<Vertex> stack;  // decreasing from bottom to top
  for (std::size_t pi = part.paths.size(); pi-- > 0;) {
    const LeftPath& path = part.paths[pi];
    auto on_path = [&](Vertex v) { return part.is_core(v) && part.path_of[v] == pi; };
    stack.clear();
    for (std::size_t k = path.members.size(); k-- > 0;) {
      Vertex u = path.members[k];
      for (std::uint32_t b = begin[u]; b < begin[u + 1]; ++b) {
        auto [x, y] = pg.arcs[bucket[b]];
        Vertex v = dsu.find(y);
        if (on_path(v)) {
          auto it = std::lower_bound(stack.begin(), stack.end(), v, std::greater<>());
          v = it == stack.end() ? u : *it;
        }
        bags.push(v, x);
      }
      while (!bags.empty(u)) {
        Vertex x = bags.pop(u);
        if (stats) ++stats->bag_pops;
        Vertex v = dsu.find(x);
        if (!on_path(v)) {
          h[v] = u;
          bags.splice(u, v);
          dsu.unite(u, v);
        } else if (v != u && !stack.empty() && v >= stack.back()) {
          while (!stack.empty() && stack.back() <= v) {
            Vertex w = stack.back();
            stack.pop_back();
            h[w] = u;
            bags.splice(u, w);
          }
        }
      }
      stack.push_back(u);
    }
    for (std::size_t k = path.members.size(); k-- > 0;) {
      Vertex u = path.members[k];
      if (h[u] != kNone) dsu.unite(h[u], u);
    }
  }
  if (stats) {
    stats->finds += dsu.finds();
    stats->find_path_nodes += dsu.find_path_nodes();
  }
}

}  // namespace detail

/// Interval forest of a flowgraph in preorder numbering: h[v] is the head of
/// v, or kNone. `part` must be fringe_core_paths of pg.tree.
inline std::vector<Vertex> interval_forest(const PreorderGraph& pg, const TreePartition& part, IntervalStats* stats = nullptr) {
  std::size_t n = pg.n;
  const RootedTree& t = pg.tree;
  std::vector<Vertex> h(n + 1, kNone);

  // Heads inside the fringe, one topological computation per microtree.
  std::vector<std::vector<LocalArc>> local(n + 1);
  for (std::uint32_t i = 0; i < pg.arcs.size(); ++i) {
    auto [x, y] = pg.arcs[i];
    if (pg.classes[i] == ArcClass::tree || !part.same_micro(x, y)) continue;
    Vertex s = part.micro[x];
    local[s].push_back({x - s + 1, y - s + 1, 1});
  }
  TopoBatch batch(part.g, 1);
  std::vector<SmallInstance> instances;
  instances.reserve(part.micro_roots.size());
  for (Vertex s : part.micro_roots) {
    SmallInstance inst = detail::subtree_instance(t, s);
    inst.arcs.insert(inst.arcs.end(), local[s].begin(), local[s].end());
    batch.add(inst);
    instances.push_back(std::move(inst));
  }
  solve_and_transfer(
      batch.group(), [&](std::uint32_t id) { return detail::local_heads(instances[id]); },
      [&](std::uint32_t id, const std::vector<std::uint32_t>& lh) {
        Vertex s = part.micro_roots[id];
        for (std::uint32_t x = 1; x < lh.size(); ++x)
          if (lh[x]) h[s + x - 1] = s + lh[x] - 1;
      });
  if (stats) {
    const BatchCounters& c = batch.counters();
    stats->batch.instances += c.instances;
    stats->batch.tokens += c.tokens;
    stats->batch.sort_work += c.sort_work;
    stats->batch.groups += c.groups;
  }

  DisjointSets dsu(n);
  for (Vertex v = static_cast<Vertex>(n); v >= 1; --v)
    if (!part.is_core(v) && h[v] != kNone) dsu.unite(h[v], v);
  detail::interval_core(pg, part, dsu, h, stats);
  return h;
}

/// Compressed interval forest: h'[v] is the nearest core ancestor of v in H.
/// Fringe strong components are contracted directly instead of computing
/// fringe heads.
inline std::vector<Vertex> compressed_interval_forest(const PreorderGraph& pg, const TreePartition& part,
                                                      IntervalStats* stats = nullptr) {
  std::size_t n = pg.n;
  std::vector<VertexPair> inner;
  for (auto [x, y] : pg.arcs)
    if (part.same_micro(x, y)) inner.emplace_back(x, y);
  auto comp = detail::strong_components(n, inner);
  std::vector<Vertex> smallest(n + 1, kNone);
  for (Vertex v = 1; v <= n; ++v)
    if (smallest[comp[v]] == kNone) smallest[comp[v]] = v;

  DisjointSets dsu(n);
  for (Vertex v = 1; v <= n; ++v)
    if (!part.is_core(v) && smallest[comp[v]] != v) dsu.unite(smallest[comp[v]], v);
  std::vector<Vertex> h(n + 1, kNone);
  detail::interval_core(pg, part, dsu, h, stats);
  for (Vertex v = 1; v <= n; ++v)
    if (!part.is_core(v)) h[v] = h[smallest[comp[v]]];
  return h;
}

/// Heads in original vertex ids; g_override replaces the default microtree size.
inline std::vector<Vertex> interval_heads(const Digraph& g, bool compressed = false, std::optional<std::size_t> g_override = {},
                                          IntervalStats* stats = nullptr) {
  PreorderGraph pg = preorder_graph(g);
  TreePartition part = fringe_core_paths(pg.tree, g_override.value_or(default_g(g.n)));
  auto hp = compressed ? compressed_interval_forest(pg, part, stats) : interval_forest(pg, part, stats);
  std::vector<Vertex> h(g.n + 1, kNone);
  for (Vertex v = 1; v <= g.n; ++v)
    if (hp[v] != kNone) h[pg.to_original[v]] = pg.to_original[hp[v]];
  return h;
}

}  // namespace treepath
