#pragma once

#include <climits>
#include <string>
#include <vector>

#include "treepath/generators.hpp"
#include "treepath/linkeval.hpp"

namespace treepath::testing {

/// Uncompressed copy of the linked forest, for reference answers.
struct ReferenceForest {
  std::vector<Vertex> parent;
  std::vector<int> value;
  explicit ReferenceForest(std::size_t n) : parent(n + 1, kNone), value(n + 1, INT_MAX) {}

  void link(Vertex v, Vertex w, int x) {
    parent[w] = v;
    value[w] = x;
  }
  Vertex root(Vertex v) const {
    while (parent[v] != kNone) v = parent[v];
    return v;
  }
  int eval(Vertex v) const {
    int best = INT_MAX;
    for (; parent[v] != kNone; v = parent[v]) best = std::min(best, value[v]);
    return best;
  }
  /// Whether a is a non-root node on the path from v's root to v.
  bool on_path(Vertex a, Vertex v) const {
    for (; parent[v] != kNone; v = parent[v])
      if (v == a) return true;
    return false;
  }
  /// Deepest node whose arc attains eval(v), or 0 at a root.
  Vertex eval_arg(Vertex v) const {
    int best = eval(v);
    for (; parent[v] != kNone; v = parent[v])
      if (value[v] == best) return v;
    return kNone;
  }
};

/// Checks the shadow-forest invariants; returns a description of the first
/// violation or an empty string.
inline std::string shadow_violation(const ShadowLinkEval<int>& s, const ReferenceForest& f) {
  std::size_t n = s.size();
  std::vector<std::uint32_t> subsize(n + 1, 0);
  for (Vertex x = 1; x <= n; ++x)
    for (Vertex u = x; u != kNone; u = s.reference_shp(u)) ++subsize[u];
  for (Vertex v = 1; v <= n; ++v) {
    int want = f.eval(v);
    int cur = s.b(v), ref = s.b(v);
    for (Vertex u = s.shp(v); u != kNone; u = s.shp(u)) cur = std::min(cur, s.b(u));
    for (Vertex u = s.reference_shp(v); u != kNone; u = s.reference_shp(u)) ref = std::min(ref, s.b(u));
    if (cur != want || ref != want) return "(i) fails at " + std::to_string(v);
    if (Vertex c = s.shc(v); c != kNone && s.b(v) < s.b(c)) return "(ii) fails at " + std::to_string(v);
    Vertex p = s.reference_shp(v);
    if (s.mode() == LinkMode::by_rank) {
      if (p != kNone && s.rank(p) <= s.rank(v)) return "(iii) fails at " + std::to_string(v);
      if (2.0 * subsize[v] * subsize[v] < static_cast<double>(std::uint64_t{1} << s.rank(v)))
        return "rank subsize law fails at " + std::to_string(v);
    } else if (p != kNone && s.reference_shp(p) != kNone) {
      if (subsize[s.reference_shp(p)] < 2 * subsize[v]) return "size subsize law fails at " + std::to_string(v);
    }
  }
  return {};
}

struct TraceResult {
  std::size_t ops = 0;
  std::size_t violations = 0;
  std::size_t mismatches = 0;
  std::string first;
};

/// Random link/eval/findroot trace run against Simple, Shadow and the
/// reference forest, checking invariants after every operation when `check`.
inline TraceResult run_trace(std::size_t n, std::size_t ops, std::uint64_t seed, LinkMode mode, bool check = true) {
  gen::Rng rng(seed);
  SimpleLinkEval<int> simple(n, INT_MAX);
  ShadowLinkEval<int> shadow(n, INT_MAX, mode);
  ReferenceForest f(n);
  std::vector<Vertex> roots;
  for (Vertex v = 1; v <= n; ++v) roots.push_back(v);
  TraceResult r;
  auto fail = [&](std::size_t& counter, std::string what) {
    if (counter++ == 0 && r.first.empty()) r.first = std::move(what);
  };
  for (std::size_t k = 0; k < ops; ++k) {
    std::uint64_t kind = rng.below(10);
    Vertex v = static_cast<Vertex>(rng.range(1, n));
    if (kind < 3 && roots.size() > 1) {
      std::size_t i = rng.below(roots.size()), j = rng.below(roots.size() - 1);
      if (j >= i) ++j;
      Vertex a = roots[i], b = roots[j];
      int x = static_cast<int>(rng.range(1, 50));
      simple.link(a, b, x);
      shadow.link(a, b, x);
      f.link(a, b, x);
      roots[j] = roots.back();
      roots.pop_back();
    } else if (kind < 7) {
      int want = f.eval(v);
      if (simple.eval(v) != want || shadow.eval(v) != want) fail(r.mismatches, "eval differs at " + std::to_string(v));
      if (simple.eval_arg(v) != f.eval_arg(v)) fail(r.mismatches, "simple eval_arg differs at " + std::to_string(v));
      Vertex a = shadow.eval_arg(v);
      if (want == INT_MAX ? a != kNone : (a == kNone || f.value[a] != want || !f.on_path(a, v)))
        fail(r.mismatches, "shadow eval_arg differs at " + std::to_string(v));
    } else {
      Vertex want = f.root(v);
      if (simple.findroot(v) != want || shadow.findroot(v) != want)
        fail(r.mismatches, "findroot differs at " + std::to_string(v));
    }
    ++r.ops;
    if (check) {
      if (auto why = shadow_violation(shadow, f); !why.empty()) fail(r.violations, why);
    }
  }
  return r;
}

}  // namespace treepath::testing
