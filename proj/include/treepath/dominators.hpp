#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <vector>

#include "treepath/graphio.hpp"
#include "treepath/intervals.hpp"
#include "treepath/linkeval.hpp"
#include "treepath/mst.hpp"
#include "treepath/nca.hpp"
#include "treepath/partition.hpp"
#include "treepath/topobatch.hpp"

namespace treepath {

struct DominatorStats {
  LinkEvalCounters linkeval;
  IntervalStats intervals;
  NcaStats nca;
  PathMaxStats rdom;
  BatchCounters batch;
  std::uint64_t early_arcs = 0;
  std::uint64_t late_arcs = 0;
  std::uint64_t deferred_arcs = 0;
};

/// t(w) = min of w and every arc source into w, in preorder numbers.
inline std::vector<Vertex> initial_tags(const PreorderGraph& pg) {
  std::vector<Vertex> t(pg.n + 1);
  for (Vertex v = 0; v <= pg.n; ++v) t[v] = v;
  for (auto [u, v] : pg.arcs) t[v] = std::min(t[v], u);
  return t;
}

namespace detail {

/// Extended tags of a small instance whose labels are the initial tags:
/// et(w) = min(label(w), min et over (nca(u, w), u] for arcs (u, w) with u
/// not an ancestor of w), evaluated in reverse local preorder.
inline std::vector<std::uint32_t> local_extended_tags(const SmallInstance& inst) {
  std::uint32_t cnt = inst.vertex_count();
  auto parent = local_parents(inst);
  std::vector<std::uint32_t> size(cnt + 1, 1);
  for (std::uint32_t x = cnt; x >= 2; --x) size[parent[x]] += size[x];
  auto ancestor = [&](std::uint32_t a, std::uint32_t b) { return a <= b && b < a + size[a]; };
  std::vector<std::vector<std::uint32_t>> in(cnt + 1);
  for (const LocalArc& a : inst.arcs) in[a.head].push_back(a.tail);
  std::vector<std::uint32_t> et(cnt + 1, 0);
  for (std::uint32_t w = cnt; w >= 1; --w) {
    std::uint32_t e = inst.labels[w - 1];
    for (std::uint32_t u : in[w]) {
      if (ancestor(u, w)) continue;
      for (std::uint32_t y = u; !ancestor(y, w); y = parent[y]) e = std::min(e, et[y]);
    }
    et[w] = e;
  }
  return et;
}

}  // namespace detail

/// Semi-dominators in preorder numbering (sdom[1] = 1). `part` must be
/// fringe_core_paths of pg.tree.
inline std::vector<Vertex> semidominators(const PreorderGraph& pg, const TreePartition& part, DominatorStats* stats = nullptr) {
  std::size_t n = pg.n;
  const RootedTree& d = pg.tree;
  std::vector<Vertex> ct = initial_tags(pg);
  std::vector<Vertex> hp = compressed_interval_forest(pg, part, stats ? &stats->intervals : nullptr);
  for (Vertex v = 1; v <= n; ++v)
    if (!part.is_core(v) && hp[v] != kNone) ct[hp[v]] = std::min(ct[hp[v]], ct[v]);

  std::vector<VertexPair> big;
  std::vector<std::uint32_t> inner;  // indices of arcs inside one microtree
  for (std::uint32_t i = 0; i < pg.arcs.size(); ++i) {
    auto [u, v] = pg.arcs[i];
    if (part.same_micro(u, v)) inner.push_back(i);
    else if (pg.classes[i] == ArcClass::cross) big.push_back(pg.arcs[i]);
  }
  auto nca = nca_linear(d, big, part.g, stats ? &stats->nca : nullptr);

  auto path_bottom = [&](Vertex v) { return part.paths[part.path_of[v]].bottom; };
  auto bucket_by = [&](std::vector<std::uint32_t>& begin, std::vector<std::uint32_t>& items, auto&& key, std::size_t count) {
    begin.assign(n + 2, 0);
    for (std::uint32_t i = 0; i < count; ++i)
      if (Vertex k = key(i); k != kNone) ++begin[k + 1];
    for (std::size_t k = 1; k < begin.size(); ++k) begin[k] += begin[k - 1];
    items.resize(begin[n + 1]);
    std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
    for (std::uint32_t i = 0; i < count; ++i)
      if (Vertex k = key(i); k != kNone) items[fill[k]++] = i;
  };

  // A big cross arc (u, v) with u below the chosen child of a = nca(u, v)
  // is late: its top part waits for the path through a. Every other arc is
  // early and evaluated whole, just before v's computed tag is consumed.
  std::vector<Vertex> late_key(big.size(), kNone), early_key(big.size(), kNone);
  for (std::uint32_t i = 0; i < big.size(); ++i) {
    auto [u, v] = big[i];
    Vertex a = nca[i], c = part.chosen_child[a];
    if (c != kNone && d.ancestor(c, u)) {
      late_key[i] = a;
      continue;
    }
    Vertex e;
    if (part.is_core(v)) {
      e = path_bottom(v);
    } else {
      e = part.micro[v];
      if (hp[v] != kNone && hp[v] > a) e = std::max(e, path_bottom(hp[v]));
    }
    early_key[i] = e;
  }
  std::vector<std::uint32_t> late_begin, late_items, early_begin, early_items, inner_begin, inner_items;
  bucket_by(late_begin, late_items, [&](std::uint32_t i) { return late_key[i]; }, big.size());
  bucket_by(early_begin, early_items, [&](std::uint32_t i) { return early_key[i]; }, big.size());
  bucket_by(inner_begin, inner_items, [&](std::uint32_t i) { return part.micro[pg.arcs[inner[i]].first]; }, inner.size());
  if (stats) {
    stats->late_arcs += late_items.size();
    stats->early_arcs += early_items.size();
  }

  std::vector<std::int64_t> path_at_bottom(n + 1, -1), path_at_top(n + 1, -1);
  for (std::size_t p = 0; p < part.paths.size(); ++p) {
    path_at_bottom[part.paths[p].bottom] = static_cast<std::int64_t>(p);
    path_at_top[part.paths[p].top] = static_cast<std::int64_t>(p);
  }

  struct Deferred {
    Vertex u, v, top;
  };
  std::vector<Deferred> deferred;
  std::vector<std::int64_t> deferred_head(n + 1, -1), deferred_next;

  ShadowLinkEval<Vertex> le(n, UINT32_MAX);
  std::vector<Vertex> ct_before(n + 1, 0);
  auto lower = [&](Vertex v, Vertex x) {
    ct[v] = std::min(ct[v], x);
    if (!part.is_core(v) && hp[v] != kNone) ct[hp[v]] = std::min(ct[hp[v]], ct[v]);
  };
  auto apply_early = [&](Vertex at) {
    for (std::uint32_t k = early_begin[at]; k < early_begin[at + 1]; ++k) {
      auto [u, v] = big[early_items[k]];
      lower(v, le.eval(u));
    }
  };

  std::vector<VertexPair> local;
  std::vector<Vertex> comp_min;
  auto visit_microtree = [&](Vertex s) {
    apply_early(s);
    Vertex last = s + d.size(s) - 1;
    for (Vertex w = s; w <= last; ++w) ct_before[w] = ct[w];

    // Microtags: minima over strong components in topological order.
    local.clear();
    for (std::uint32_t k = inner_begin[s]; k < inner_begin[s + 1]; ++k) {
      auto [x, y] = pg.arcs[inner[inner_items[k]]];
      local.emplace_back(x - s + 1, y - s + 1);
    }
    auto comp = detail::strong_components(d.size(s), local);
    std::uint32_t comps = 0;
    for (std::uint32_t x = 1; x < comp.size(); ++x) comps = std::max(comps, comp[x]);
    comp_min.assign(comps + 1, UINT32_MAX);
    for (Vertex w = s; w <= last; ++w) comp_min[comp[w - s + 1]] = std::min(comp_min[comp[w - s + 1]], ct[w]);
    std::sort(local.begin(), local.end(), [&](const VertexPair& a, const VertexPair& b) { return comp[a.first] > comp[b.first]; });
    for (auto [x, y] : local)
      if (comp[x] != comp[y]) comp_min[comp[y]] = std::min(comp_min[comp[y]], comp_min[comp[x]]);
    for (Vertex w = s; w <= last; ++w) ct[w] = comp_min[comp[w - s + 1]];

    for (Vertex w = last; w >= s; --w)
      if (d.parent(w) != kNone) le.link(d.parent(w), w, ct[w]);
    for (std::int64_t k = deferred_head[s]; k >= 0; k = deferred_next[k]) {
      auto [u, v, top] = deferred[k];
      lower(v, std::min(top, le.eval(u)));
    }
  };

  std::vector<VertexPair> ranges;
  std::vector<std::uint32_t> range_arc;
  std::vector<Vertex> path_ct;
  auto first_visit = [&](const LeftPath& path) {
    apply_early(path.bottom);
    for (std::size_t k = path.members.size(); k-- > 0;) {
      Vertex w = path.members[k];
      if (hp[w] != kNone) ct[hp[w]] = std::min(ct[hp[w]], ct[w]);
    }
    ranges.clear();
    range_arc.clear();
    std::vector<Vertex> defer_at;
    for (Vertex a : path.members)
      for (std::uint32_t k = late_begin[a]; k < late_begin[a + 1]; ++k) {
        std::uint32_t i = late_items[k];
        Vertex u = big[i].first;
        bool now = u >= path.bottom || part.is_core(u);
        Vertex mid = now ? le.findroot(u) : d.parent(part.micro[u]);
        ranges.emplace_back(part.path_pos[a] + 2, part.path_pos[mid] + 1);
        range_arc.push_back(i);
        defer_at.push_back(now ? kNone : part.micro[u]);
      }
    if (ranges.empty()) return;
    path_ct.clear();
    for (Vertex w : path.members) path_ct.push_back(ct[w]);
    auto cart = cartesian_tree<Vertex>(path_ct);
    auto tops = range_min(cart, ranges, part.g, stats ? &stats->nca : nullptr);
    for (std::size_t k = 0; k < ranges.size(); ++k) {
      auto [u, v] = big[range_arc[k]];
      Vertex top = tops[k].second;
      if (defer_at[k] == kNone) {
        lower(v, std::min(top, le.eval(u)));
      } else {
        deferred.push_back({u, v, top});
        deferred_next.push_back(deferred_head[defer_at[k]]);
        deferred_head[defer_at[k]] = static_cast<std::int64_t>(deferred.size() - 1);
        if (stats) ++stats->deferred_arcs;
      }
    }
  };
  auto second_visit = [&](const LeftPath& path) {
    if (d.parent(path.top) == kNone) return;
    for (std::size_t k = path.members.size(); k-- > 0;) {
      Vertex w = path.members[k];
      le.link(d.parent(w), w, ct[w]);
    }
  };

  for (Vertex x = static_cast<Vertex>(n); x >= 1; --x) {
    if (part.micro[x] == x) visit_microtree(x);
    if (path_at_bottom[x] >= 0) first_visit(part.paths[path_at_bottom[x]]);
    if (path_at_top[x] >= 0) second_visit(part.paths[path_at_top[x]]);
  }

  // Second pass: extended tags inside each microtree, tags ranked to [1, g].
  std::vector<Vertex> sdom = ct;
  if (!part.micro_roots.empty()) {
    std::vector<std::uint32_t> group, value, member;
    std::vector<std::uint32_t> micro_index(n + 1, 0);
    for (std::uint32_t k = 0; k < part.micro_roots.size(); ++k) micro_index[part.micro_roots[k]] = k;
    for (Vertex v = 1; v <= n; ++v)
      if (!part.is_core(v)) {
        group.push_back(micro_index[part.micro[v]]);
        value.push_back(ct_before[v]);
        member.push_back(v);
      }
    auto rank = rank_within_groups(group, value, part.micro_roots.size(), n);
    std::vector<std::uint32_t> label(n + 1, 0);
    std::vector<Vertex> rank_value(n + 1, kNone);  // rank r in microtree s -> value at s + r - 1
    for (std::size_t k = 0; k < member.size(); ++k) {
      Vertex v = member[k];
      label[v] = rank[k];
      rank_value[part.micro[v] + rank[k] - 1] = value[k];
    }
    unsigned bits = static_cast<unsigned>(std::bit_width(part.g));
    TopoBatch batch(part.g, bits);
    std::vector<SmallInstance> instances;
    instances.reserve(part.micro_roots.size());
    for (Vertex s : part.micro_roots) {
      SmallInstance inst = detail::subtree_instance(d, s);
      for (std::uint32_t x = 0; x < inst.labels.size(); ++x) inst.labels[x] = label[s + x];
      for (std::uint32_t k = inner_begin[s]; k < inner_begin[s + 1]; ++k) {
        std::uint32_t i = inner[inner_items[k]];
        if (pg.classes[i] == ArcClass::tree) continue;
        auto [x, y] = pg.arcs[i];
        inst.arcs.push_back({x - s + 1, y - s + 1, 1});
      }
      batch.add(inst);
      instances.push_back(std::move(inst));
    }
    solve_and_transfer(
        batch.group(), [&](std::uint32_t id) { return detail::local_extended_tags(instances[id]); },
        [&](std::uint32_t id, const std::vector<std::uint32_t>& et) {
          Vertex s = part.micro_roots[id];
          for (std::uint32_t x = 1; x < et.size(); ++x) sdom[s + x - 1] = rank_value[s + et[x] - 1];
        });
    if (stats) {
      const BatchCounters& c = batch.counters();
      stats->batch.instances += c.instances;
      stats->batch.tokens += c.tokens;
      stats->batch.sort_work += c.sort_work;
      stats->batch.groups += c.groups;
    }
  }
  if (stats) {
    const LinkEvalCounters& c = le.counters();
    stats->linkeval.links += c.links;
    stats->linkeval.evals += c.evals;
    stats->linkeval.compress_nodes += c.compress_nodes;
  }
  return sdom;
}

/// rdom(v) = a vertex u minimizing sdom(u) over the tree path (sdom(v), v],
/// found as path minima over the tree with cost sdom(u) on (p(u), u).
inline std::vector<Vertex> relative_dominators(const RootedTree& d, std::span<const Vertex> sdom, std::size_t g,
                                               PathMaxStats* stats = nullptr) {
  std::size_t n = d.n();
  std::vector<Vertex> rdom(n + 1, kNone);
  if (n < 2) return rdom;
  std::vector<WeightedEdge> edges;
  std::vector<VertexPair> q;
  for (Vertex v = 1; v <= n; ++v) {
    if (d.parent(v) == kNone) continue;
    edges.push_back({d.parent(v), v, {static_cast<double>(sdom[v]), v}});
    q.emplace_back(sdom[v], v);
  }
  auto m = path_maxima(n, edges, q, g, KeyOrder{true}, stats);
  for (std::size_t k = 0; k < q.size(); ++k) rdom[q[k].second] = m[k]->idx;
  return rdom;
}

/// Top-down resolution: idom(v) = sdom(v) if sdom(rdom(v)) = sdom(v), else
/// idom(rdom(v)). Vertices are preorder numbers.
inline std::vector<Vertex> immediate_dominators(const RootedTree& d, std::span<const Vertex> sdom, std::span<const Vertex> rdom) {
  std::size_t n = d.n();
  std::vector<Vertex> idom(n + 1, kNone);
  for (Vertex v = 1; v <= n; ++v) {
    Vertex w = d.vertex_at(v);
    if (d.parent(w) == kNone) continue;
    idom[w] = sdom[rdom[w]] == sdom[w] ? sdom[w] : idom[rdom[w]];
  }
  return idom;
}

enum class DominatorAlgo { linear, lt, naive };

namespace detail {

inline std::vector<Vertex> idom_linear(const PreorderGraph& pg, std::size_t g, DominatorStats* stats) {
  TreePartition part = fringe_core_paths(pg.tree, g);
  auto sdom = semidominators(pg, part, stats);
  auto rdom = relative_dominators(pg.tree, sdom, g, stats ? &stats->rdom : nullptr);
  return immediate_dominators(pg.tree, sdom, rdom);
}

/// Lengauer-Tarjan with the simple link-eval structure.
inline std::vector<Vertex> idom_lt(const PreorderGraph& pg, DominatorStats* stats) {
  std::size_t n = pg.n;
  const RootedTree& d = pg.tree;
  std::vector<std::uint32_t> begin(n + 2, 0), pred(pg.arcs.size());
  for (auto [u, v] : pg.arcs) ++begin[v + 1];
  for (std::size_t i = 1; i < begin.size(); ++i) begin[i] += begin[i - 1];
  {
    std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
    for (auto [u, v] : pg.arcs) pred[fill[v]++] = u;
  }
  std::vector<Vertex> semi(n + 1), idom(n + 1, kNone);
  for (Vertex v = 0; v <= n; ++v) semi[v] = v;
  std::vector<std::vector<Vertex>> bucket(n + 1);
  SimpleLinkEval<Vertex> le(n, UINT32_MAX);
  for (Vertex w = static_cast<Vertex>(n); w >= 2; --w) {
    for (std::uint32_t k = begin[w]; k < begin[w + 1]; ++k) {
      Vertex v = pred[k];
      Vertex x = v <= w ? v : le.eval(v);
      semi[w] = std::min(semi[w], x);
    }
    bucket[semi[w]].push_back(w);
    Vertex p = d.parent(w);
    le.link(p, w, semi[w]);
    for (Vertex v : bucket[p]) {
      Vertex u = le.eval_arg(v);
      idom[v] = semi[u] < semi[v] ? u : p;
    }
    bucket[p].clear();
  }
  for (Vertex w = 2; w <= n; ++w)
    if (idom[w] != semi[w]) idom[w] = idom[idom[w]];
  if (stats) {
    const LinkEvalCounters& c = le.counters();
    stats->linkeval.links += c.links;
    stats->linkeval.evals += c.evals;
    stats->linkeval.compress_nodes += c.compress_nodes;
  }
  return idom;
}

/// Removes each vertex in turn and marks what becomes unreachable.
inline std::vector<Vertex> idom_naive(const PreorderGraph& pg) {
  std::size_t n = pg.n;
  Adjacency adj;
  {
    std::vector<Arc> arcs;
    arcs.reserve(pg.arcs.size());
    for (auto [u, v] : pg.arcs) arcs.push_back({u, v, std::nullopt});
    adj = out_arcs(n, arcs);
  }
  std::vector<Vertex> head(pg.arcs.size());
  for (std::uint32_t i = 0; i < pg.arcs.size(); ++i) head[i] = pg.arcs[i].second;
  std::vector<Vertex> idom(n + 1, kNone);
  std::vector<char> seen(n + 1);
  std::vector<Vertex> queue;
  // Dominators of w are ancestors of w, so the last one found in
  // increasing order is the immediate dominator.
  for (Vertex dv = 1; dv <= n; ++dv) {
    std::fill(seen.begin(), seen.end(), 0);
    seen[dv] = 1;
    if (dv != 1) {
      queue.assign(1, 1);
      seen[1] = 1;
      for (std::size_t k = 0; k < queue.size(); ++k)
        for (std::uint32_t j = adj.begin[queue[k]]; j < adj.begin[queue[k] + 1]; ++j)
          if (Vertex y = head[adj.arc[j]]; !seen[y]) {
            seen[y] = 1;
            queue.push_back(y);
          }
    }
    for (Vertex w = 1; w <= n; ++w)
      if (w != dv && !seen[w]) idom[w] = dv;
  }
  return idom;
}

}  // namespace detail

/// Immediate dominators in original vertex ids; idom[root] = 0.
inline std::vector<Vertex> dominators(const Digraph& g, DominatorAlgo algo = DominatorAlgo::linear,
                                      std::optional<std::size_t> g_override = {}, DominatorStats* stats = nullptr) {
  PreorderGraph pg = preorder_graph(g);
  std::vector<Vertex> ip;
  switch (algo) {
    case DominatorAlgo::linear: ip = detail::idom_linear(pg, g_override.value_or(default_g(g.n)), stats); break;
    case DominatorAlgo::lt: ip = detail::idom_lt(pg, stats); break;
    case DominatorAlgo::naive: ip = detail::idom_naive(pg); break;
  }
  std::vector<Vertex> idom(g.n + 1, kNone);
  for (Vertex v = 1; v <= g.n; ++v)
    if (ip[v] != kNone) idom[pg.to_original[v]] = pg.to_original[ip[v]];
  return idom;
}

}  // namespace treepath
