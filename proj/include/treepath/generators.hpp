#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "treepath/graphio.hpp"

namespace treepath::gen {

/// Deterministic generator; bounded draws use plain modulo so results do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t k) { return next() % k; }
  /// Uniform in [lo, hi].
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Random relabeling of 1..n that keeps `fixed` in place (0 keeps nothing).
inline std::vector<Vertex> relabeling(std::size_t n, Rng& rng, Vertex fixed = kNone) {
  std::vector<Vertex> label(n + 1);
  std::iota(label.begin(), label.end(), Vertex{0});
  std::vector<Vertex> rest;
  for (Vertex v = 1; v <= n; ++v)
    if (v != fixed) rest.push_back(v);
  auto shuffled = rest;
  rng.shuffle(shuffled);
  for (std::size_t i = 0; i < rest.size(); ++i) label[rest[i]] = shuffled[i];
  return label;
}

/// Random recursive tree: vertex v > 1 attaches to v - 1 with probability
/// `chain_bias`, otherwise to a uniform earlier vertex. Parents indexed by
/// creation order; vertex 1 is the root.
inline std::vector<Vertex> recursive_parents(std::size_t n, Rng& rng, double chain_bias = 0.0) {
  std::vector<Vertex> parent(n + 1, kNone);
  for (Vertex v = 2; v <= n; ++v)
    parent[v] = rng.chance(chain_bias) ? v - 1 : static_cast<Vertex>(rng.range(1, v - 1));
  return parent;
}

/// Random tree file with shuffled labels and edge order. When `weighted`,
/// edges carry integer weights in [1, max_weight].
inline Digraph random_tree(std::size_t n, std::uint64_t seed, double chain_bias = 0.0, bool weighted = false,
                           std::uint64_t max_weight = 100) {
  Rng rng(seed);
  auto parent = recursive_parents(n, rng, chain_bias);
  auto label = relabeling(n, rng);
  Digraph t;
  t.kind = GraphKind::tree;
  t.n = n;
  for (Vertex v = 2; v <= n; ++v) {
    Arc a{label[parent[v]], label[v], {}};
    if (rng.chance(0.5)) std::swap(a.u, a.v);
    if (weighted) a.w = static_cast<double>(rng.range(1, max_weight));
    t.arcs.push_back(a);
  }
  rng.shuffle(t.arcs);
  return t;
}

/// Connected weighted undirected graph: a random spanning tree plus m - n + 1
/// extra edges (self-loops and parallel edges allowed), integer weights in
/// [1, max_weight] so ties occur.
inline Digraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed, std::uint64_t max_weight = 1000) {
  if (m + 1 < n) throw std::invalid_argument("random_graph needs m >= n - 1");
  Rng rng(seed);
  auto parent = recursive_parents(n, rng, 0.0);
  auto label = relabeling(n, rng);
  Digraph g;
  g.kind = GraphKind::graph;
  g.n = n;
  auto weight = [&] { return static_cast<double>(rng.range(1, max_weight)); };
  for (Vertex v = 2; v <= n; ++v) g.arcs.push_back({label[parent[v]], label[v], weight()});
  while (g.arcs.size() < m) {
    auto u = static_cast<Vertex>(rng.range(1, n)), v = static_cast<Vertex>(rng.range(1, n));
    g.arcs.push_back({u, v, weight()});
  }
  rng.shuffle(g.arcs);
  return g;
}

/// Flowgraph on a random DFS-like skeleton plus extra arcs. Each extra arc is
/// a back arc to a random ancestor with probability `back_fraction`, otherwise
/// joins two uniform vertices (giving forward, cross and back arcs).
inline Digraph random_flowgraph(std::size_t n, std::size_t m, std::uint64_t seed, double back_fraction = 0.3,
                                double chain_bias = 0.3) {
  if (m + 1 < n) throw std::invalid_argument("random_flowgraph needs m >= n - 1");
  Rng rng(seed);
  auto parent = recursive_parents(n, rng, chain_bias);
  Digraph g;
  g.kind = GraphKind::flow;
  g.n = n;
  for (Vertex v = 2; v <= n; ++v) g.arcs.push_back({parent[v], v, {}});
  while (g.arcs.size() < m) {
    auto u = static_cast<Vertex>(rng.range(1, n));
    Vertex v;
    if (rng.chance(back_fraction)) {
      v = u;
      std::uint64_t steps = rng.range(1, 8);
      for (std::uint64_t s = 0; s < steps && parent[v] != kNone; ++s) v = parent[v];
    } else {
      v = static_cast<Vertex>(rng.range(1, n));
    }
    g.arcs.push_back({u, v, {}});
  }
  auto label = relabeling(n, rng);
  for (Arc& a : g.arcs) a = {label[a.u], label[a.v], {}};
  g.root = label[1];
  rng.shuffle(g.arcs);
  return g;
}

/// Uniform query pairs over 1..n.
inline std::vector<VertexPair> random_queries(std::size_t n, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<VertexPair> q(count);
  for (auto& [u, v] : q) {
    u = static_cast<Vertex>(rng.range(1, n));
    v = static_cast<Vertex>(rng.range(1, n));
  }
  return q;
}

/// The graph on `g`'s vertices formed by the listed edges of `g`.
inline Digraph subgraph(const Digraph& g, std::span<const std::uint32_t> edges, GraphKind kind = GraphKind::tree) {
  Digraph t;
  t.kind = kind;
  t.n = g.n;
  for (std::uint32_t i : edges) t.arcs.push_back(g.arcs[i]);
  return t;
}

}  // namespace treepath::gen
