#pragma once

#include <vector>

#include "treepath/graphio.hpp"

namespace treepath {

struct LeftPath {
  Vertex top = kNone;
  Vertex bottom = kNone;
  std::vector<Vertex> members;  // top to bottom
};

/// Bottom-level microtrees (the fringe) and the remaining core, optionally
/// split into maximal left paths.
struct TreePartition {
  std::size_t g = 1;
  std::vector<Vertex> micro;             // microtree root per vertex, kNone for core
  std::vector<Vertex> micro_roots;       // in preorder
  std::vector<Vertex> chosen_child;      // smallest core child, per core vertex
  std::vector<LeftPath> paths;           // in preorder of their tops
  std::vector<std::uint32_t> path_of;    // path index per core vertex
  std::vector<std::uint32_t> path_pos;   // position on its path, 0 = top

  bool is_core(Vertex v) const { return micro[v] == kNone; }
  bool same_micro(Vertex a, Vertex b) const { return micro[a] != kNone && micro[a] == micro[b]; }
};

/// T(v) is a microtree iff |T(v)| <= g and v is the root or |T(p(v))| > g.
inline TreePartition fringe_core(const RootedTree& t, std::size_t g) {
  if (g < 1) throw std::invalid_argument("g must be positive");
  TreePartition p;
  p.g = g;
  p.micro.assign(t.n() + 1, kNone);
  for (std::size_t i = 1; i <= t.n(); ++i) {
    Vertex v = t.vertex_at(i);
    if (t.size(v) > g) continue;
    Vertex u = t.parent(v);
    if (u == kNone || t.size(u) > g) {
      p.micro[v] = v;
      p.micro_roots.push_back(v);
    } else {
      p.micro[v] = p.micro[u];
    }
  }
  return p;
}

/// Splits the core into maximal paths that follow the smallest core child.
inline void left_paths(const RootedTree& t, TreePartition& p) {
  std::size_t n = t.n();
  p.chosen_child.assign(n + 1, kNone);
  p.path_of.assign(n + 1, UINT32_MAX);
  p.path_pos.assign(n + 1, 0);
  p.paths.clear();
  for (std::size_t i = 1; i <= n; ++i) {
    Vertex v = t.vertex_at(i);
    if (!p.is_core(v)) continue;
    for (Vertex c : t.children(v))
      if (p.is_core(c)) {
        p.chosen_child[v] = c;
        break;
      }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    Vertex v = t.vertex_at(i);
    if (!p.is_core(v) || p.path_of[v] != UINT32_MAX) continue;
    LeftPath path;
    path.top = v;
    for (Vertex u = v; u != kNone; u = p.chosen_child[u]) {
      p.path_of[u] = static_cast<std::uint32_t>(p.paths.size());
      p.path_pos[u] = static_cast<std::uint32_t>(path.members.size());
      path.members.push_back(u);
      path.bottom = u;
    }
    p.paths.push_back(std::move(path));
  }
}

inline TreePartition fringe_core_paths(const RootedTree& t, std::size_t g) {
  TreePartition p = fringe_core(t, g);
  left_paths(t, p);
  return p;
}

/// Partition of the whole tree into microtrees of at most g nodes, built by
/// the bottom-up residual-size rule.
struct FullPartition {
  std::size_t g = 1;
  std::vector<std::uint32_t> s;   // residual size
  std::vector<char> marked;       // marked nodes root microtrees
  std::vector<Vertex> micro;      // microtree root per vertex
  std::vector<Vertex> roots;      // microtree roots in preorder
};

inline FullPartition full_partition(const RootedTree& t, std::size_t g) {
  if (g < 1) throw std::invalid_argument("g must be positive");
  std::size_t n = t.n();
  FullPartition p;
  p.g = g;
  p.s.assign(n + 1, 1);
  p.marked.assign(n + 1, 0);
  p.micro.assign(n + 1, kNone);
  for (std::size_t i = n; i >= 1; --i) {
    Vertex v = t.vertex_at(i);
    std::uint32_t s = 1;
    for (Vertex c : t.children(v)) s += p.s[c];
    if (s > g) {
      for (Vertex c : t.children(v)) p.marked[c] = 1;
      s = 1;
    }
    p.s[v] = s;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    Vertex v = t.vertex_at(i);
    if (v == t.root() || p.marked[v]) {
      p.micro[v] = v;
      p.roots.push_back(v);
    } else {
      p.micro[v] = p.micro[t.parent(v)];
    }
  }
  return p;
}

}  // namespace treepath
