#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "treepath/common.hpp"

namespace treepath {

/// Arc of a small instance; endpoints are local preorder numbers 1..count.
struct LocalArc {
  std::uint32_t tail = 0;
  std::uint32_t head = 0;
  std::uint32_t label = 0;
};

/// A small labeled graph whose vertices are numbered 1..count in preorder.
struct SmallInstance {
  std::vector<std::uint32_t> labels;  // labels[i - 1] is the label of vertex i
  std::vector<LocalArc> arcs;
  bool undirected = false;

  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(labels.size()); }
};

struct InstanceGroup {
  std::uint32_t canonical = 0;
  std::vector<std::uint32_t> duplicates;
};

class TopoBatchError : public Error {
 public:
  TopoBatchError(std::uint32_t instance, const std::string& what)
      : Error("instance " + std::to_string(instance) + ": " + what), instance_(instance) {}
  std::uint32_t instance() const { return instance_; }

 private:
  std::uint32_t instance_;
};

struct BatchCounters {
  std::uint64_t instances = 0;
  std::uint64_t tokens = 0;      // total encoded length
  std::uint64_t sort_work = 0;   // list moves and bucket visits during grouping
  std::uint64_t groups = 0;
};

/// Encodes small instances as token lists over a master list of length
/// max(g, 2^k + 1) and groups identical encodings with a radix sort for
/// variable-length lists.
class TopoBatch {
 public:
  TopoBatch(std::size_t g, unsigned label_bits)
      : g_(g), master_(std::max<std::size_t>(g, (std::size_t{1} << label_bits) + 1)) {
    offsets_.push_back(0);
  }

  std::size_t master_length() const { return master_; }
  std::size_t size() const { return offsets_.size() - 1; }

  /// Appends the encoding of `inst`; returns its instance id.
  std::uint32_t add(const SmallInstance& inst) {
    auto id = static_cast<std::uint32_t>(size());
    std::uint32_t count = inst.vertex_count();
    if (count == 0 || count > g_) throw TopoBatchError(id, "oversize instance");
    auto token = [&](std::uint64_t x) {
      if (x > master_) throw TopoBatchError(id, "label overflow");
      tokens_.push_back(static_cast<std::uint32_t>(x));
    };
    token(count);
    for (std::uint32_t i = 1; i <= count; ++i) {
      token(i);
      token(inst.labels[i - 1]);
    }
    for (const LocalArc& a : inst.arcs) {
      if (a.tail < 1 || a.tail > count || a.head < 1 || a.head > count) throw TopoBatchError(id, "arc endpoint out of range");
      bool swap = inst.undirected && a.head < a.tail;
      token(swap ? a.head : a.tail);
      token(swap ? a.tail : a.head);
      token(a.label);
    }
    offsets_.push_back(tokens_.size());
    counters_.instances++;
    return id;
  }

  std::span<const std::uint32_t> encoding(std::uint32_t id) const {
    return {tokens_.data() + offsets_[id], tokens_.data() + offsets_[id + 1]};
  }

  /// Groups instances with identical encodings. The first instance of each
  /// class is canonical; groups are ordered by their canonical instance.
  std::vector<InstanceGroup> group() {
    std::size_t k = size();
    counters_.tokens = tokens_.size();
    if (k == 0) return {};
    std::size_t maxlen = 0;
    for (std::size_t i = 0; i < k; ++i) maxlen = std::max<std::size_t>(maxlen, offsets_[i + 1] - offsets_[i]);

    // Sorted distinct tokens per position: bucket all (position, token) pairs
    // by token, then stably by position.
    std::vector<std::uint32_t> by_token = counting_order(tokens_.size(), master_ + 1, [&](std::size_t e) { return tokens_[e]; });
    std::vector<std::uint32_t> pos_of(tokens_.size());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) pos_of[e] = static_cast<std::uint32_t>(e - offsets_[i]);
    std::vector<std::uint32_t> pos_begin(maxlen + 1, 0);
    for (std::uint32_t p : pos_of) ++pos_begin[p + 1];
    for (std::size_t j = 1; j <= maxlen; ++j) pos_begin[j] += pos_begin[j - 1];
    std::vector<std::uint32_t> nonempty(tokens_.size());
    {
      std::vector<std::uint32_t> fill(pos_begin.begin(), pos_begin.end() - 1);
      for (std::uint32_t e : by_token) nonempty[fill[pos_of[e]]++] = tokens_[e];
    }
    counters_.sort_work += 2 * tokens_.size();

    // Lists by length.
    std::vector<std::uint32_t> by_len = counting_order(k, maxlen + 1, [&](std::size_t i) { return offsets_[i + 1] - offsets_[i]; });
    std::size_t len_cursor = k;

    std::vector<std::uint32_t> queue, next_queue;
    queue.reserve(k);
    next_queue.reserve(k);
    std::vector<std::int64_t> head(master_ + 1, -1), tail(master_ + 1, -1);
    std::vector<std::int64_t> link(k, -1);
    for (std::size_t j = maxlen; j >= 1; --j) {
      // Lists of length exactly j go in front of the queue.
      std::size_t start = len_cursor;
      while (start > 0 && length(by_len[start - 1]) == j) --start;
      next_queue.assign(by_len.begin() + static_cast<std::ptrdiff_t>(start), by_len.begin() + static_cast<std::ptrdiff_t>(len_cursor));
      next_queue.insert(next_queue.end(), queue.begin(), queue.end());
      len_cursor = start;
      std::swap(queue, next_queue);
      for (std::uint32_t i : queue) {
        std::uint32_t t = tokens_[offsets_[i] + j - 1];
        link[i] = -1;
        if (head[t] < 0) head[t] = i;
        else link[tail[t]] = i;
        tail[t] = i;
      }
      next_queue.clear();
      std::uint32_t prev = UINT32_MAX;
      for (std::size_t e = pos_begin[j - 1]; e < pos_begin[j]; ++e) {
        std::uint32_t t = nonempty[e];
        ++counters_.sort_work;
        if (t == prev) continue;
        prev = t;
        for (std::int64_t i = head[t]; i >= 0; i = link[i]) next_queue.push_back(static_cast<std::uint32_t>(i));
        head[t] = tail[t] = -1;
      }
      counters_.sort_work += queue.size();
      std::swap(queue, next_queue);
    }

    std::vector<std::uint32_t> group_of(k);
    std::vector<InstanceGroup> sorted_groups;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      std::uint32_t i = queue[q];
      if (q > 0 && equal_lists(queue[q - 1], i)) {
        sorted_groups.back().duplicates.push_back(i);
      } else {
        sorted_groups.push_back({i, {}});
      }
      group_of[i] = static_cast<std::uint32_t>(sorted_groups.size() - 1);
    }
    std::vector<InstanceGroup> groups;
    groups.reserve(sorted_groups.size());
    for (std::uint32_t i = 0; i < k; ++i)
      if (sorted_groups[group_of[i]].canonical == i) groups.push_back(std::move(sorted_groups[group_of[i]]));
    counters_.groups = groups.size();
    return groups;
  }

  const BatchCounters& counters() const { return counters_; }

 private:
  std::size_t length(std::uint32_t i) const { return offsets_[i + 1] - offsets_[i]; }

  bool equal_lists(std::uint32_t a, std::uint32_t b) {
    auto x = encoding(a), y = encoding(b);
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      ++counters_.sort_work;
      if (x[i] != y[i]) return false;
    }
    return true;
  }

  template <class Key>
  static std::vector<std::uint32_t> counting_order(std::size_t count, std::size_t buckets, Key key) {
    std::vector<std::uint32_t> begin(buckets + 1, 0);
    for (std::size_t e = 0; e < count; ++e) ++begin[key(e) + 1];
    for (std::size_t b = 1; b <= buckets; ++b) begin[b] += begin[b - 1];
    std::vector<std::uint32_t> out(count);
    for (std::size_t e = 0; e < count; ++e) out[begin[key(e)]++] = static_cast<std::uint32_t>(e);
    return out;
  }

  std::size_t g_;
  std::size_t master_;
  std::vector<std::uint32_t> tokens_;
  std::vector<std::size_t> offsets_;
  BatchCounters counters_;
};

/// Solves each canonical instance once and hands the solution to every member
/// of its group. Local vertex numbers of group members correspond one to one,
/// so `transfer(id, solution)` copies by local index.
template <class Solver, class Transfer>
void solve_and_transfer(const std::vector<InstanceGroup>& groups, Solver&& solve, Transfer&& transfer) {
  for (const InstanceGroup& grp : groups) {
    auto solution = [&] {
      try {
        return solve(grp.canonical);
      } catch (const TopoBatchError&) {
        throw;
      } catch (const std::exception& e) {
        throw TopoBatchError(grp.canonical, e.what());
      }
    }();
    transfer(grp.canonical, solution);
    for (std::uint32_t d : grp.duplicates) transfer(d, solution);
  }
}

/// Ranks values within groups: result[i] is 1 + the number of distinct values
/// smaller than value[i] among elements with the same group. Two stable
/// bucket passes, values in [0, max_value], groups in [0, group_count).
inline std::vector<std::uint32_t> rank_within_groups(std::span<const std::uint32_t> group, std::span<const std::uint32_t> value,
                                                     std::size_t group_count, std::size_t max_value) {
  std::size_t k = group.size();
  std::vector<std::uint32_t> vb(max_value + 2, 0), gb(group_count + 1, 0);
  for (std::size_t i = 0; i < k; ++i) ++vb[value[i] + 1];
  for (std::size_t i = 1; i < vb.size(); ++i) vb[i] += vb[i - 1];
  std::vector<std::uint32_t> by_value(k);
  for (std::size_t i = 0; i < k; ++i) by_value[vb[value[i]]++] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < k; ++i) ++gb[group[i] + 1];
  for (std::size_t i = 1; i < gb.size(); ++i) gb[i] += gb[i - 1];
  std::vector<std::uint32_t> sorted(k);
  for (std::uint32_t i : by_value) sorted[gb[group[i]]++] = i;
  std::vector<std::uint32_t> rank(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::uint32_t i = sorted[j];
    if (j > 0 && group[sorted[j - 1]] == group[i])
      rank[i] = rank[sorted[j - 1]] + (value[sorted[j - 1]] != value[i] ? 1 : 0);
    else
      rank[i] = 1;
  }
  return rank;
}

}  // namespace treepath
