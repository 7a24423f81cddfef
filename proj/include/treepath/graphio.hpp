#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treepath/common.hpp"

namespace treepath {

enum class GraphKind { graph, flow, tree };

struct Arc {
  Vertex u = kNone;
  Vertex v = kNone;
  std::optional<double> w;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// A graph, flowgraph or tree as read from a file. Arcs keep file order.
struct Digraph {
  GraphKind kind = GraphKind::graph;
  std::size_t n = 0;
  std::vector<Arc> arcs;
  Vertex root = 1;

  friend bool operator==(const Digraph&, const Digraph&) = default;
};

using VertexPair = std::pair<Vertex, Vertex>;

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A rooted tree with preorder numbers, subtree sizes and CSR child lists.
class RootedTree {
 public:
  RootedTree() = default;

  /// Builds the tree from parent links (parent[root] = 0, index 0 unused).
  /// Children are ordered by their position in `child_order`, which must list
  /// every non-root vertex once; by default children are ordered by id.
  explicit RootedTree(std::vector<Vertex> parent, std::span<const Vertex> child_order = {})
      : parent_(std::move(parent)) {
    if (parent_.size() < 2) throw std::invalid_argument("tree needs at least one vertex");
    n_ = parent_.size() - 1;
    parent_[0] = kNone;
    for (Vertex v = 1; v <= n_; ++v) {
      if (parent_[v] > n_ || parent_[v] == v) throw std::invalid_argument("bad parent link");
      if (parent_[v] == kNone) {
        if (root_ != kNone) throw std::invalid_argument("tree has more than one root");
        root_ = v;
      }
    }
    if (root_ == kNone) throw std::invalid_argument("tree has no root");

    child_begin_.assign(n_ + 2, 0);
    for (Vertex v = 1; v <= n_; ++v) ++child_begin_[parent_[v] + 1];
    child_begin_[0] = 0;
    child_begin_[1] = 0;
    for (std::size_t i = 2; i < child_begin_.size(); ++i) child_begin_[i] += child_begin_[i - 1];
    children_.assign(n_ > 0 ? n_ - 1 : 0, kNone);
    std::vector<std::uint32_t> fill(child_begin_.begin(), child_begin_.end() - 1);
    auto place = [&](Vertex v) {
      if (v < 1 || v > n_ || v == root_) throw std::invalid_argument("bad child order");
      children_[fill[parent_[v]]++] = v;
    };
    if (child_order.empty()) {
      for (Vertex v = 1; v <= n_; ++v)
        if (v != root_) place(v);
    } else {
      if (child_order.size() != n_ - 1) throw std::invalid_argument("bad child order");
      for (Vertex v : child_order) place(v);
    }

    pre_.assign(n_ + 1, 0);
    order_.assign(n_ + 1, kNone);
    std::vector<Vertex> stack{root_};
    Vertex next = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      if (pre_[v] != 0) throw std::invalid_argument("child order lists a vertex twice");
      pre_[v] = next;
      order_[next++] = v;
      auto kids = children(v);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    if (next != n_ + 1) throw std::invalid_argument("parent links contain a cycle");

    size_.assign(n_ + 1, 1);
    depth_.assign(n_ + 1, 0);
    for (std::size_t i = n_; i >= 2; --i) size_[parent_[order_[i]]] += size_[order_[i]];
    for (std::size_t i = 2; i <= n_; ++i) depth_[order_[i]] = depth_[parent_[order_[i]]] + 1;
  }

  std::size_t n() const { return n_; }
  Vertex root() const { return root_; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  Vertex pre(Vertex v) const { return pre_[v]; }
  /// Vertex with preorder number i.
  Vertex vertex_at(std::size_t i) const { return order_[i]; }
  std::uint32_t size(Vertex v) const { return size_[v]; }
  std::uint32_t depth(Vertex v) const { return depth_[v]; }
  std::span<const Vertex> children(Vertex v) const {
    return {children_.data() + child_begin_[v], children_.data() + child_begin_[v + 1]};
  }
  const std::vector<Vertex>& parents() const { return parent_; }

  /// True iff u lies on the path from the root to v (reflexive).
  bool ancestor(Vertex u, Vertex v) const { return pre_[u] <= pre_[v] && pre_[v] < pre_[u] + size_[u]; }

  /// Vertices in postorder (each vertex after all of its descendants, children in order).
  std::vector<Vertex> postorder() const {
    std::vector<Vertex> out;
    out.reserve(n_);
    std::vector<std::pair<Vertex, std::uint32_t>> stack{{root_, 0}};
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      auto kids = children(v);
      if (i < kids.size()) {
        Vertex c = kids[i++];
        stack.emplace_back(c, 0);
      } else {
        out.push_back(v);
        stack.pop_back();
      }
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  Vertex root_ = kNone;
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> child_begin_;
  std::vector<Vertex> children_;
  std::vector<Vertex> pre_;
  std::vector<Vertex> order_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> depth_;
};

enum class ArcClass { tree, forward, back, cross };

struct DfsResult {
  RootedTree tree;
  std::vector<ArcClass> classes;  // one per arc, in arc order
};

namespace detail {

struct Adjacency {
  std::vector<std::uint32_t> begin;
  std::vector<std::uint32_t> arc;  // arc indices grouped by tail, file order kept
};

inline Adjacency out_arcs(std::size_t n, std::span<const Arc> arcs) {
  Adjacency adj;
  adj.begin.assign(n + 2, 0);
  for (const Arc& a : arcs) ++adj.begin[a.u + 1];
  for (std::size_t i = 1; i < adj.begin.size(); ++i) adj.begin[i] += adj.begin[i - 1];
  adj.arc.resize(arcs.size());
  std::vector<std::uint32_t> fill(adj.begin.begin(), adj.begin.end() - 1);
  for (std::uint32_t i = 0; i < arcs.size(); ++i) adj.arc[fill[arcs[i].u]++] = i;
  return adj;
}

/// Iterative DFS from root; returns parent links (0 = root or unreached) and
/// discovery order. `tree_arc` receives, per vertex, the discovering arc index.
inline std::vector<Vertex> dfs_parents(std::size_t n, std::span<const Arc> arcs, Vertex root, bool undirected,
                                       std::vector<Vertex>& discovered, std::vector<std::uint32_t>* tree_arc) {
  std::vector<Arc> both;
  std::span<const Arc> use = arcs;
  if (undirected) {
    both.reserve(2 * arcs.size());
    for (const Arc& a : arcs) {
      both.push_back(a);
      both.push_back({a.v, a.u, a.w});
    }
    use = both;
  }
  Adjacency adj = out_arcs(n, use);
  std::vector<Vertex> parent(n + 1, kNone);
  std::vector<char> seen(n + 1, 0);
  if (tree_arc) tree_arc->assign(n + 1, UINT32_MAX);
  discovered.clear();
  std::vector<std::pair<Vertex, std::uint32_t>> stack;
  seen[root] = 1;
  discovered.push_back(root);
  stack.emplace_back(root, adj.begin[root]);
  while (!stack.empty()) {
    auto& [v, pos] = stack.back();
    if (pos == adj.begin[v + 1]) {
      stack.pop_back();
      continue;
    }
    std::uint32_t ai = adj.arc[pos++];
    Vertex w = use[ai].v;
    if (seen[w]) continue;
    seen[w] = 1;
    parent[w] = v;
    if (tree_arc) (*tree_arc)[w] = undirected ? ai / 2 : ai;
    discovered.push_back(w);
    stack.emplace_back(w, adj.begin[w]);
  }
  return parent;
}

inline double parse_weight(std::string_view tok, std::size_t line) {
  double w = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
  if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError(line, "bad weight '" + std::string(tok) + "'");
  if (!std::isfinite(w)) throw ParseError(line, "weight must be finite");
  return w;
}

inline std::uint64_t parse_count(std::string_view tok, std::size_t line, const char* what) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  return x;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line = 0, i = 0;
  while (i < text.size()) {
    std::size_t j = text.find('\n', i);
    if (j == std::string_view::npos) j = text.size();
    ++line;
    auto toks = split_ws(text.substr(i, j - i));
    if (!toks.empty() && toks[0] != "c") f(line, toks);
    i = j + 1;
  }
}

}  // namespace detail

/// Parses the `p`/`r`/`a` text format. Structural errors are reported
/// against the line of the `p` header.
inline Digraph parse_graph(std::string_view text) {
  Digraph g;
  bool have_header = false, have_root = false;
  std::size_t header_line = 0, declared_m = 0;
  auto vertex = [&](std::string_view tok, std::size_t line) {
    std::uint64_t v = detail::parse_count(tok, line, "vertex");
    if (v < 1 || v > g.n) throw ParseError(line, "vertex " + std::string(tok) + " out of range");
    return static_cast<Vertex>(v);
  };
  detail::for_each_line(text, [&](std::size_t line, const std::vector<std::string_view>& t) {
    if (!have_header) {
      if (t[0] != "p" || t.size() != 4) throw ParseError(line, "expected 'p <kind> <n> <m>'");
      if (t[1] == "graph") g.kind = GraphKind::graph;
      else if (t[1] == "flow") g.kind = GraphKind::flow;
      else if (t[1] == "tree") g.kind = GraphKind::tree;
      else throw ParseError(line, "unknown kind '" + std::string(t[1]) + "'");
      std::uint64_t n = detail::parse_count(t[2], line, "vertex count");
      if (n < 1 || n >= UINT32_MAX) throw ParseError(line, "vertex count out of range");
      g.n = n;
      declared_m = detail::parse_count(t[3], line, "arc count");
      have_header = true;
      header_line = line;
      g.arcs.reserve(std::min<std::size_t>(declared_m, 1u << 24));
      return;
    }
    if (t[0] == "p") throw ParseError(line, "duplicate 'p' line");
    if (t[0] == "r") {
      if (g.kind != GraphKind::flow) throw ParseError(line, "root line only allowed in flow files");
      if (have_root) throw ParseError(line, "duplicate root line");
      if (t.size() != 2) throw ParseError(line, "expected 'r <v>'");
      g.root = vertex(t[1], line);
      have_root = true;
      return;
    }
    if (t[0] == "a") {
      if (t.size() != 3 && t.size() != 4) throw ParseError(line, "expected 'a <u> <v> [<w>]'");
      if (g.arcs.size() == declared_m) throw ParseError(line, "more arcs than declared");
      Arc a{vertex(t[1], line), vertex(t[2], line), std::nullopt};
      if (t.size() == 4) a.w = detail::parse_weight(t[3], line);
      g.arcs.push_back(a);
      return;
    }
    throw ParseError(line, "unknown line type '" + std::string(t[0]) + "'");
  });
  if (!have_header) throw ParseError(1, "missing 'p' line");
  if (g.arcs.size() != declared_m)
    throw ParseError(header_line, "declared " + std::to_string(declared_m) + " arcs, found " + std::to_string(g.arcs.size()));

  std::vector<Vertex> discovered;
  switch (g.kind) {
    case GraphKind::tree:
      if (g.arcs.size() + 1 != g.n) throw ParseError(header_line, "a tree needs exactly n-1 edges");
      [[fallthrough]];
    case GraphKind::graph:
      detail::dfs_parents(g.n, g.arcs, 1, true, discovered, nullptr);
      if (discovered.size() != g.n) throw ParseError(header_line, "graph is not connected");
      break;
    case GraphKind::flow:
      detail::dfs_parents(g.n, g.arcs, g.root, false, discovered, nullptr);
      if (discovered.size() != g.n) throw ParseError(header_line, "vertex not reachable from root");
      break;
  }
  return g;
}

inline std::string format_weight(double w) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, p);
}

/// Canonical text form: no comments, root line only for flowgraphs.
inline std::string serialize(const Digraph& g) {
  std::string out = "p ";
  out += g.kind == GraphKind::graph ? "graph" : g.kind == GraphKind::flow ? "flow" : "tree";
  out += " " + std::to_string(g.n) + " " + std::to_string(g.arcs.size()) + "\n";
  if (g.kind == GraphKind::flow) out += "r " + std::to_string(g.root) + "\n";
  for (const Arc& a : g.arcs) {
    out += "a " + std::to_string(a.u) + " " + std::to_string(a.v);
    if (a.w) out += " " + format_weight(*a.w);
    out += "\n";
  }
  return out;
}

/// Parses `q u v` lines against a vertex count.
inline std::vector<VertexPair> parse_queries(std::string_view text, std::size_t n) {
  std::vector<VertexPair> q;
  detail::for_each_line(text, [&](std::size_t line, const std::vector<std::string_view>& t) {
    if (t[0] != "q" || t.size() != 3) throw ParseError(line, "expected 'q <u> <v>'");
    auto u = detail::parse_count(t[1], line, "vertex"), v = detail::parse_count(t[2], line, "vertex");
    if (u < 1 || u > n || v < 1 || v > n) throw ParseError(line, "vertex out of range");
    q.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  });
  return q;
}

/// Roots an undirected tree at `root`, children in adjacency (file) order.
inline RootedTree root_tree(const Digraph& t, Vertex root = 1) {
  if (t.arcs.size() + 1 != t.n) throw std::invalid_argument("not a tree: wrong edge count");
  std::vector<Vertex> discovered;
  auto parent = detail::dfs_parents(t.n, t.arcs, root, true, discovered, nullptr);
  if (discovered.size() != t.n) throw std::invalid_argument("not a tree: disconnected");
  return RootedTree(std::move(parent), std::span<const Vertex>(discovered).subspan(1));
}

/// Deterministic DFS of a flowgraph from its root, visiting out-arcs in file
/// order, plus a classification of every arc. Self-loops count as forward.
inline DfsResult dfs_preorder(const Digraph& g) {
  std::vector<Vertex> discovered;
  std::vector<std::uint32_t> tree_arc;
  auto parent = detail::dfs_parents(g.n, g.arcs, g.root, false, discovered, &tree_arc);
  if (discovered.size() != g.n) throw Error("vertex not reachable from root");
  DfsResult r{RootedTree(std::move(parent), std::span<const Vertex>(discovered).subspan(1)), {}};
  r.classes.resize(g.arcs.size());
  for (std::uint32_t i = 0; i < g.arcs.size(); ++i) {
    auto [u, v, w] = g.arcs[i];
    if (v != g.root && tree_arc[v] == i) r.classes[i] = ArcClass::tree;
    else if (r.tree.ancestor(u, v)) r.classes[i] = ArcClass::forward;
    else if (r.tree.ancestor(v, u)) r.classes[i] = ArcClass::back;
    else r.classes[i] = ArcClass::cross;
  }
  return r;
}

/// A flowgraph renumbered so that every vertex id is its DFS preorder number.
struct PreorderGraph {
  std::size_t n = 0;
  std::vector<Vertex> to_original;  // preorder -> original id
  std::vector<Vertex> to_pre;       // original id -> preorder
  RootedTree tree;                  // root 1, vertex i has preorder i
  std::vector<VertexPair> arcs;     // file order, preorder ids
  std::vector<ArcClass> classes;
};

inline PreorderGraph preorder_graph(const Digraph& g) {
  DfsResult d = dfs_preorder(g);
  PreorderGraph p;
  p.n = g.n;
  p.to_original.assign(g.n + 1, kNone);
  p.to_pre.assign(g.n + 1, kNone);
  for (Vertex v = 1; v <= g.n; ++v) {
    p.to_pre[v] = d.tree.pre(v);
    p.to_original[d.tree.pre(v)] = v;
  }
  std::vector<Vertex> parent(g.n + 1, kNone);
  for (Vertex v = 1; v <= g.n; ++v)
    if (d.tree.parent(v) != kNone) parent[p.to_pre[v]] = p.to_pre[d.tree.parent(v)];
  p.tree = RootedTree(std::move(parent));
  p.arcs.reserve(g.arcs.size());
  for (const Arc& a : g.arcs) p.arcs.emplace_back(p.to_pre[a.u], p.to_pre[a.v]);
  p.classes = std::move(d.classes);
  return p;
}

}  // namespace treepath
