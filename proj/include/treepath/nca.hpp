#pragma once

#include <functional>
#include <span>
#include <vector>

#include "treepath/dsu.hpp"
#include "treepath/graphio.hpp"
#include "treepath/partition.hpp"
#include "treepath/topobatch.hpp"

namespace treepath {

struct NcaStats {
  std::uint64_t finds = 0;
  std::uint64_t find_path_nodes = 0;
  std::uint64_t small_queries = 0;
  std::uint64_t big_queries = 0;
  BatchCounters batch;
};

namespace detail {

/// AHU over the queries listed in `which`; writes answers[i] for those.
inline void nca_ahu_subset(const RootedTree& t, std::span<const VertexPair> q, std::span<const std::uint32_t> which,
                           std::vector<Vertex>& answers, NcaStats* stats) {
  std::size_t n = t.n();
  std::vector<std::uint32_t> begin(n + 2, 0);
  for (std::uint32_t i : which) {
    ++begin[q[i].first + 1];
    ++begin[q[i].second + 1];
  }
  for (std::size_t v = 1; v < begin.size(); ++v) begin[v] += begin[v - 1];
  std::vector<std::uint32_t> bucket(begin[n + 1]);
  {
    std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
    for (std::uint32_t i : which) {
      bucket[fill[q[i].first]++] = i;
      bucket[fill[q[i].second]++] = i;
    }
  }
  DisjointSets dsu(n);
  std::vector<char> visited(n + 1, 0);
  for (Vertex v : t.postorder()) {
    for (std::uint32_t k = begin[v]; k < begin[v + 1]; ++k) {
      std::uint32_t i = bucket[k];
      Vertex w = q[i].first == v ? q[i].second : q[i].first;
      if (visited[w]) answers[i] = dsu.find(w);
    }
    visited[v] = 1;
    if (t.parent(v) != kNone) dsu.unite(t.parent(v), v);
  }
  if (stats) {
    stats->finds += dsu.finds();
    stats->find_path_nodes += dsu.find_path_nodes();
  }
}

/// Instance of the subtree rooted at `s`, vertices numbered by preorder
/// offset; the tree arcs come first, in child order.
inline SmallInstance subtree_instance(const RootedTree& t, Vertex s) {
  SmallInstance inst;
  std::uint32_t base = t.pre(s), count = t.size(s);
  inst.labels.assign(count, 0);
  for (std::uint32_t i = 1; i < count; ++i) {
    Vertex v = t.vertex_at(base + i);
    inst.arcs.push_back({t.pre(t.parent(v)) - base + 1, i + 1, 0});
  }
  return inst;
}

/// Local parents (index 0 unused, root 0) from the label-0 arcs of `inst`.
inline std::vector<std::uint32_t> local_parents(const SmallInstance& inst) {
  std::vector<std::uint32_t> parent(inst.vertex_count() + 1, 0);
  for (const LocalArc& a : inst.arcs)
    if (a.label == 0) parent[a.head] = a.tail;
  return parent;
}

}  // namespace detail

/// Offline NCAs by the Aho-Hopcroft-Ullman postorder sweep.
inline std::vector<Vertex> nca_ahu(const RootedTree& t, std::span<const VertexPair> q, NcaStats* stats = nullptr) {
  std::vector<Vertex> answers(q.size(), kNone);
  std::vector<std::uint32_t> which;
  for (std::uint32_t i = 0; i < q.size(); ++i) {
    if (q[i].first == q[i].second) answers[i] = q[i].first;
    else which.push_back(i);
  }
  detail::nca_ahu_subset(t, q, which, answers, stats);
  if (stats) stats->big_queries += which.size();
  return answers;
}

/// Offline NCAs with microtrees: queries inside one microtree are answered by
/// batched topological computation, the rest by AHU.
inline std::vector<Vertex> nca_linear(const RootedTree& t, std::span<const VertexPair> q, std::size_t g,
                                      NcaStats* stats = nullptr) {
  std::vector<Vertex> answers(q.size(), kNone);
  TreePartition part = fringe_core(t, g);
  std::vector<std::uint32_t> big;
  std::vector<std::vector<std::uint32_t>> small_of(t.n() + 1);
  for (std::uint32_t i = 0; i < q.size(); ++i) {
    auto [v, w] = q[i];
    if (v == w) answers[i] = v;
    else if (part.same_micro(v, w)) small_of[part.micro[v]].push_back(i);
    else big.push_back(i);
  }

  TopoBatch batch(g, 1);
  std::vector<SmallInstance> instances;
  std::vector<Vertex> instance_root;
  for (Vertex s : part.micro_roots) {
    if (small_of[s].empty()) continue;
    SmallInstance inst = detail::subtree_instance(t, s);
    inst.undirected = true;
    std::uint32_t base = t.pre(s);
    for (std::uint32_t i : small_of[s]) inst.arcs.push_back({t.pre(q[i].first) - base + 1, t.pre(q[i].second) - base + 1, 1});
    batch.add(inst);
    instances.push_back(std::move(inst));
    instance_root.push_back(s);
  }
  auto groups = batch.group();
  solve_and_transfer(
      groups,
      [&](std::uint32_t id) {
        const SmallInstance& inst = instances[id];
        auto parent = detail::local_parents(inst);
        std::vector<std::uint32_t> out;
        std::vector<char> mark(inst.vertex_count() + 1, 0);
        for (const LocalArc& a : inst.arcs) {
          if (a.label != 1) continue;
          for (std::uint32_t x = a.tail; x != 0; x = parent[x]) mark[x] = 1;
          std::uint32_t y = a.head;
          while (!mark[y]) y = parent[y];
          out.push_back(y);
          for (std::uint32_t x = a.tail; x != 0; x = parent[x]) mark[x] = 0;
        }
        return out;
      },
      [&](std::uint32_t id, const std::vector<std::uint32_t>& local) {
        Vertex s = instance_root[id];
        const auto& qs = small_of[s];
        for (std::size_t k = 0; k < qs.size(); ++k) answers[qs[k]] = t.vertex_at(t.pre(s) + local[k] - 1);
      });

  detail::nca_ahu_subset(t, q, big, answers, stats);
  if (stats) {
    stats->big_queries += big.size();
    for (Vertex s : part.micro_roots) stats->small_queries += small_of[s].size();
    const BatchCounters& c = batch.counters();
    stats->batch.instances += c.instances;
    stats->batch.tokens += c.tokens;
    stats->batch.sort_work += c.sort_work;
    stats->batch.groups += c.groups;
  }
  return answers;
}

/// Min-heap ordered binary tree over positions 1..len; in-order is position
/// order and ties put the leftmost minimum highest.
template <class T>
struct CartesianTree {
  std::vector<T> values;        // values[0] unused
  std::vector<Vertex> parent, left, right;
  Vertex root = kNone;
  RootedTree tree;

  std::size_t length() const { return values.size() - 1; }
};

template <class T, class Compare = std::less<T>>
CartesianTree<T> cartesian_tree(std::span<const T> vals, Compare cmp = {}) {
  if (vals.empty()) throw std::invalid_argument("cartesian_tree of an empty sequence");
  std::size_t len = vals.size();
  CartesianTree<T> ct;
  ct.values.reserve(len + 1);
  ct.values.push_back(vals[0]);
  ct.values.insert(ct.values.end(), vals.begin(), vals.end());
  ct.parent.assign(len + 1, kNone);
  ct.left.assign(len + 1, kNone);
  ct.right.assign(len + 1, kNone);
  std::vector<Vertex> stack;
  for (Vertex i = 1; i <= len; ++i) {
    Vertex last = kNone;
    while (!stack.empty() && cmp(ct.values[i], ct.values[stack.back()])) {
      last = stack.back();
      stack.pop_back();
    }
    ct.left[i] = last;
    if (last != kNone) ct.parent[last] = i;
    if (!stack.empty()) {
      ct.right[stack.back()] = i;
      ct.parent[i] = stack.back();
    }
    stack.push_back(i);
  }
  ct.root = stack.front();
  std::vector<Vertex> order;
  order.reserve(len);
  for (Vertex i = 1; i <= len; ++i) {
    if (ct.left[i]) order.push_back(ct.left[i]);
    if (ct.right[i]) order.push_back(ct.right[i]);
  }
  ct.tree = RootedTree(ct.parent, order);
  return ct;
}

/// Leftmost minimum position of each range [i, j], answered offline as NCAs
/// in the Cartesian tree.
template <class T>
std::vector<std::pair<Vertex, T>> range_min(const CartesianTree<T>& ct, std::span<const VertexPair> ranges, std::size_t g,
                                            NcaStats* stats = nullptr) {
  for (auto [i, j] : ranges)
    if (i < 1 || i > j || j > ct.length()) throw std::invalid_argument("bad range");
  auto a = nca_linear(ct.tree, ranges, g, stats);
  std::vector<std::pair<Vertex, T>> out;
  out.reserve(a.size());
  for (Vertex p : a) out.emplace_back(p, ct.values[p]);
  return out;
}

template <class T>
std::pair<Vertex, T> range_min(const CartesianTree<T>& ct, Vertex i, Vertex j) {
  VertexPair r{i, j};
  return range_min(ct, std::span<const VertexPair>(&r, 1), default_g(ct.length()))[0];
}

}  // namespace treepath
