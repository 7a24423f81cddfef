#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "treepath/common.hpp"

namespace treepath {

enum class UnionMode { by_size, by_rank };

/// Disjoint set union over elements 1..n with designated elements.
///
/// unite(v, w) takes the designated elements of two sets and makes v the
/// designated element of the union. find compresses the traversed path.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n, UnionMode mode = UnionMode::by_rank)
      : mode_(mode), parent_(n + 1, kNone), ref_parent_(n + 1, kNone), weight_(n + 1, mode == UnionMode::by_size ? 1 : 0),
        designated_(n + 1), root_of_(n + 1) {
    if (n == 0) throw std::invalid_argument("DisjointSets needs at least one element");
    for (Vertex v = 0; v <= n; ++v) designated_[v] = root_of_[v] = v;
  }

  std::size_t size() const { return parent_.size() - 1; }
  UnionMode mode() const { return mode_; }

  /// Designated element of v's set.
  Vertex find(Vertex v) {
    ++finds_;
    Vertex r = v;
    ++find_path_nodes_;
    while (parent_[r] != kNone) {
      r = parent_[r];
      ++find_path_nodes_;
    }
    while (parent_[v] != kNone && parent_[v] != r) {
      Vertex next = parent_[v];
      parent_[v] = r;
      v = next;
    }
    return designated_[r];
  }

  bool is_designated(Vertex v) const { return root_of_[v] != kNone; }

  void unite(Vertex v, Vertex w) {
    if (!is_designated(v) || !is_designated(w)) throw std::invalid_argument("unite needs designated elements");
    if (v == w) throw std::invalid_argument("unite of a set with itself");
    ++unions_;
    Vertex rv = root_of_[v], rw = root_of_[w];
    Vertex top = rv, below = rw;
    if (weight_[rw] > weight_[rv]) std::swap(top, below);
    parent_[below] = ref_parent_[below] = top;
    if (mode_ == UnionMode::by_size) weight_[top] += weight_[below];
    else if (weight_[top] == weight_[below]) ++weight_[top];
    root_of_[w] = kNone;
    root_of_[v] = top;
    designated_[top] = v;
  }

  /// unite(find(x), find(y)); returns the new designated element (find(x)).
  Vertex unite_any(Vertex x, Vertex y) {
    Vertex a = find(x), b = find(y);
    if (a != b) unite(a, b);
    return a;
  }

  std::uint64_t finds() const { return finds_; }
  std::uint64_t find_path_nodes() const { return find_path_nodes_; }
  std::uint64_t unions() const { return unions_; }
  void reset_counters() { finds_ = find_path_nodes_ = unions_ = 0; }

  /// Parent links of the forest built by unions alone (no compression).
  const std::vector<Vertex>& reference_parents() const { return ref_parent_; }

 private:
  UnionMode mode_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> ref_parent_;
  std::vector<std::uint32_t> weight_;  // size or rank, meaningful at roots
  std::vector<Vertex> designated_;     // per root
  std::vector<Vertex> root_of_;        // per designated element, else 0
  std::uint64_t finds_ = 0, find_path_nodes_ = 0, unions_ = 0;
};

namespace detail {

inline constexpr std::uint64_t kAckCap = std::uint64_t{1} << 20;

/// Ackermann's function A(i, j), saturating at kAckCap.
inline std::uint64_t ackermann(unsigned i, std::uint64_t j) {
  if (i == 1) return j >= 20 ? kAckCap : (std::uint64_t{1} << j);
  std::uint64_t a = ackermann(i - 1, 2);
  for (std::uint64_t k = 2; k <= j; ++k) {
    if (a >= kAckCap) return kAckCap;
    a = ackermann(i - 1, a);
  }
  return a;
}

}  // namespace detail

/// alpha(m, n) = min{ i >= 1 : A(i, floor(m/n)) > log2 n }. floor(m/n) is
/// clamped to at least 1.
inline unsigned inverse_ackermann(std::uint64_t m, std::uint64_t n) {
  if (n < 2 || m < 1) throw std::invalid_argument("inverse_ackermann needs m >= 1, n >= 2");
  std::uint64_t j = m / n < 1 ? 1 : m / n;
  long double lg = std::log2(static_cast<long double>(n));
  for (unsigned i = 1;; ++i)
    if (static_cast<long double>(detail::ackermann(i, j)) > lg) return i;
}

}  // namespace treepath
