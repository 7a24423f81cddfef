#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "treepath/common.hpp"

namespace treepath {

/// Counters shared by the link-eval structures.
struct LinkEvalCounters {
  std::uint64_t links = 0;
  std::uint64_t evals = 0;            // eval and findroot calls
  std::uint64_t compress_nodes = 0;   // nodes on compressed paths, roots included
};

/// Path evaluation over a forest of nodes 1..n built by link operations.
///
/// eval(v) returns the smallest arc value (under Compare) on the path from
/// v's root to v, or `identity` when v is a root. Compare = std::greater
/// gives path maxima. eval_arg returns the deeper endpoint of a minimizing
/// arc; ties go to the deepest such node.
template <class Value, class Compare = std::less<Value>>
class SimpleLinkEval {
 public:
  SimpleLinkEval(std::size_t n, Value identity, Compare cmp = {})
      : cmp_(cmp), identity_(identity), parent_(n + 1, kNone), value_(n + 1, identity), arg_(n + 1, kNone) {}

  std::size_t size() const { return parent_.size() - 1; }
  bool is_root(Vertex v) const { return parent_[v] == kNone; }

  void link(Vertex v, Vertex w, const Value& x) {
    if (v == w || !is_root(v) || !is_root(w)) throw std::invalid_argument("link needs roots of distinct trees");
    ++counters_.links;
    parent_[w] = v;
    value_[w] = x;
    arg_[w] = w;
  }

  Value eval(Vertex v) {
    ++counters_.evals;
    if (is_root(v)) return identity_;
    compress(v);
    return value_[v];
  }

  Vertex eval_arg(Vertex v) {
    ++counters_.evals;
    if (is_root(v)) return kNone;
    compress(v);
    return arg_[v];
  }

  Vertex findroot(Vertex v) {
    ++counters_.evals;
    return is_root(v) ? v : compress(v);
  }

  const LinkEvalCounters& counters() const { return counters_; }

 private:
  // Compresses the path from v's root to v; returns the root.
  Vertex compress(Vertex v) {
    path_.clear();
    Vertex u = v;
    while (parent_[u] != kNone) {
      path_.push_back(u);
      u = parent_[u];
    }
    counters_.compress_nodes += path_.size() + 1;
    for (std::size_t i = path_.size(); i-- > 1;) {
      Vertex above = path_[i], node = path_[i - 1];
      if (cmp_(value_[above], value_[node])) {
        value_[node] = value_[above];
        arg_[node] = arg_[above];
      }
      parent_[node] = u;
    }
    return u;
  }

  Compare cmp_;
  Value identity_;
  std::vector<Vertex> parent_;
  std::vector<Value> value_;
  std::vector<Vertex> arg_;
  std::vector<Vertex> path_;
  LinkEvalCounters counters_;
};

enum class LinkMode { by_size, by_rank };

/// Link-eval with shadow forests: each tree of the linked forest F is kept as
/// a chain of subtrees hanging from the root by subroot-child links (shc),
/// linked by size or by rank so that compressed paths stay short.
///
/// eval_arg returns a node attaining the minimum; on ties it is deterministic
/// but not necessarily the deepest.
template <class Value, class Compare = std::less<Value>>
class ShadowLinkEval {
 public:
  ShadowLinkEval(std::size_t n, Value identity, LinkMode mode = LinkMode::by_rank, Compare cmp = {})
      : cmp_(cmp), mode_(mode), identity_(identity), b_(n + 1, identity), barg_(n + 1, kNone), shp_(n + 1, kNone),
        ref_shp_(n + 1, kNone), shc_(n + 1, kNone), size_(n + 1, 1), rank_(n + 1, 0), maxrank_(n + 1, 0),
        deepest_(n + 1, kNone), treeroot_(n + 1, kNone), froot_(n + 1, 1) {}

  std::size_t size() const { return b_.size() - 1; }
  LinkMode mode() const { return mode_; }
  bool is_root(Vertex v) const { return froot_[v] != 0; }

  void link(Vertex v, Vertex w, const Value& x) {
    if (v == w || !is_root(v) || !is_root(w)) throw std::invalid_argument("link needs roots of distinct trees");
    ++counters_.links;
    b_[w] = x;
    barg_[w] = w;
    froot_[w] = 0;
    if (mode_ == LinkMode::by_size) {
      std::uint32_t sw = size_[w];
      if (size_[v] >= sw) {
        absorb(v, w, x);
      } else {
        collapse(v);
        attach(v, w);
        rebalance(v, w, x);
      }
      size_[v] += sw;
      return;
    }
    std::uint32_t mv = maxrank_[v], mw = maxrank_[w];
    if (mv == mw) {
      rank_[v] = mv + 1;
      maxrank_[v] = mv + 1;
      collapse(v);
      absorb(v, w, x);
    } else if (mv > mw) {
      rank_[v] = std::max(rank_[v], mw + 1);
      absorb(v, w, x);
    } else {
      if (shc_[v] != kNone) {
        rank_[v] = mv + 1;
        collapse(v);
      }
      maxrank_[v] = mw;
      attach(v, w);
      rebalance(v, w, x);
    }
  }

  Value eval(Vertex v) {
    ++counters_.evals;
    if (shp_[v] == kNone) {
      ++counters_.compress_nodes;
      return b_[v];
    }
    compress(v);
    Vertex p = shp_[v];
    return cmp_(b_[p], b_[v]) ? b_[p] : b_[v];
  }

  Vertex eval_arg(Vertex v) {
    ++counters_.evals;
    if (is_root(v)) return kNone;
    if (shp_[v] == kNone) {
      ++counters_.compress_nodes;
      return barg_[v];
    }
    compress(v);
    Vertex p = shp_[v];
    return cmp_(b_[p], b_[v]) ? barg_[p] : barg_[v];
  }

  Vertex findroot(Vertex v) {
    ++counters_.evals;
    Vertex s = v;
    if (shp_[v] == kNone) ++counters_.compress_nodes;
    else s = compress(v);
    if (froot_[s]) return s;
    return treeroot_[deepest_[s]];
  }

  const LinkEvalCounters& counters() const { return counters_; }

  // Read-only views of the internal state, for invariant checks.
  const Value& b(Vertex v) const { return b_[v]; }
  Vertex shp(Vertex v) const { return shp_[v]; }
  Vertex reference_shp(Vertex v) const { return ref_shp_[v]; }
  Vertex shc(Vertex v) const { return shc_[v]; }
  bool is_subroot(Vertex v) const { return shp_[v] == kNone; }
  std::uint32_t node_size(Vertex v) const { return size_[v]; }
  std::uint32_t rank(Vertex v) const { return rank_[v]; }
  std::uint32_t maxrank(Vertex v) const { return maxrank_[v]; }

 private:
  void set_shp(Vertex u, Vertex p) { shp_[u] = ref_shp_[u] = p; }

  bool better(const Value& a, const Value& b) const { return cmp_(a, b); }

  // Part 1: every subtree of w's tree joins the subtree rooted at v.
  void absorb(Vertex v, Vertex w, const Value& x) {
    for (Vertex u = w; u != kNone;) {
      Vertex next = shc_[u];
      set_shp(u, v);
      shc_[u] = kNone;
      size_[u] = 0;
      if (better(x, b_[u])) {
        b_[u] = x;
        barg_[u] = w;
      }
      u = next;
    }
  }

  // Merges all subtrees of v's tree into the one rooted at v.
  void collapse(Vertex v) {
    for (Vertex u = shc_[v]; u != kNone;) {
      Vertex next = shc_[u];
      set_shp(u, v);
      shc_[u] = kNone;
      size_[u] = 0;
      u = next;
    }
    shc_[v] = kNone;
  }

  // Part 2 tail: w's subtree chain hangs below v.
  void attach(Vertex v, Vertex w) {
    Vertex d = shc_[w] == kNone ? w : deepest_[shc_[w]];
    shc_[v] = w;
    deepest_[w] = d;
    treeroot_[d] = v;
  }

  // Part 3: merge the top subtrees of v's chain while x < b(s1).
  void rebalance(Vertex v, Vertex w, const Value& x) {
    for (;;) {
      Vertex s0 = shc_[v], s1 = shc_[s0];
      if (s1 == kNone || !better(x, b_[s1])) return;
      bool down;
      if (mode_ == LinkMode::by_size) {
        down = subsize(s0) >= subsize(s1);
      } else if (rank_[s0] == rank_[s1]) {
        ++rank_[s0];
        maxrank_[v] = std::max(maxrank_[v], rank_[s0]);
        down = true;
      } else {
        down = rank_[s0] > rank_[s1];
      }
      if (down) {
        set_shp(s1, s0);
        shc_[s0] = shc_[s1];
        shc_[s1] = kNone;
        size_[s1] = 0;
        if (shc_[s0] == kNone) {
          deepest_[s0] = s0;
          treeroot_[s0] = v;
        }
      } else {
        set_shp(s0, s1);
        shc_[s0] = kNone;
        shc_[v] = s1;
        b_[s1] = x;
        barg_[s1] = w;
        size_[s1] = size_[s0];
        size_[s0] = 0;
      }
    }
  }

  std::uint32_t subsize(Vertex s) const { return size_[s] - (shc_[s] == kNone ? 0 : size_[shc_[s]]); }

  // Compresses the path from v's subroot to v; returns the subroot.
  Vertex compress(Vertex v) {
    path_.clear();
    Vertex u = v;
    while (shp_[u] != kNone) {
      path_.push_back(u);
      u = shp_[u];
    }
    counters_.compress_nodes += path_.size() + 1;
    for (std::size_t i = path_.size(); i-- > 1;) {
      Vertex above = path_[i], node = path_[i - 1];
      if (better(b_[above], b_[node])) {
        b_[node] = b_[above];
        barg_[node] = barg_[above];
      }
      shp_[node] = u;
    }
    return u;
  }

  Compare cmp_;
  LinkMode mode_;
  Value identity_;
  std::vector<Value> b_;
  std::vector<Vertex> barg_;
  std::vector<Vertex> shp_;
  std::vector<Vertex> ref_shp_;
  std::vector<Vertex> shc_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::uint32_t> maxrank_;
  std::vector<Vertex> deepest_;   // non-root subroot -> deepest subroot of its tree
  std::vector<Vertex> treeroot_;  // deepest subroot -> root of its tree
  std::vector<char> froot_;
  std::vector<Vertex> path_;
  LinkEvalCounters counters_;
};

}  // namespace treepath
