#include <gtest/gtest.h>

#include <map>
#include <set>

#include "treepath/generators.hpp"
#include "treepath/nca.hpp"
#include "treepath/topobatch.hpp"

using namespace treepath;

namespace {

SmallInstance tree3(std::uint32_t label) {
  SmallInstance inst;
  inst.labels = {label, 0, 0};
  inst.arcs = {{1, 2, 0}, {1, 3, 0}};
  return inst;
}

std::vector<std::uint32_t> tokens(const TopoBatch& b, std::uint32_t id) {
  auto e = b.encoding(id);
  return {e.begin(), e.end()};
}

}  // namespace

TEST(TopoBatch, SingleVertex) {
  TopoBatch b(4, 1);
  SmallInstance inst;
  inst.labels = {0};
  b.add(inst);
  EXPECT_EQ(tokens(b, 0), (std::vector<std::uint32_t>{1, 1, 0}));
}

TEST(TopoBatch, IsomorphicInstancesShareEncoding) {
  TopoBatch b(4, 1);
  b.add(tree3(0));
  b.add(tree3(0));
  b.add(tree3(1));
  EXPECT_EQ(tokens(b, 0), tokens(b, 1));
  EXPECT_NE(tokens(b, 0), tokens(b, 2));
}

TEST(TopoBatch, UndirectedEndpointsOrdered) {
  TopoBatch b(4, 1);
  SmallInstance x = tree3(0), y = tree3(0);
  x.undirected = y.undirected = true;
  x.arcs.push_back({2, 3, 1});
  y.arcs.push_back({3, 2, 1});
  b.add(x);
  b.add(y);
  EXPECT_EQ(tokens(b, 0), tokens(b, 1));
}

TEST(TopoBatch, RejectsOversizeAndOverflow) {
  TopoBatch b(2, 1);
  EXPECT_THROW(b.add(tree3(0)), TopoBatchError);
  SmallInstance big_label;
  big_label.labels = {7};
  EXPECT_THROW(b.add(big_label), TopoBatchError);
}

TEST(TopoBatch, IdenticalInstancesFormOneGroup) {
  TopoBatch b(4, 1);
  for (int i = 0; i < 6; ++i) b.add(tree3(1));
  auto groups = b.group();
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].canonical, 0u);
  EXPECT_EQ(groups[0].duplicates.size(), 5u);
}

TEST(TopoBatch, DistinctInstancesFormSeparateGroups) {
  TopoBatch b(8, 3);
  for (std::uint32_t l = 0; l < 8; ++l) b.add(tree3(l));
  EXPECT_EQ(b.group().size(), 8u);
}

// Every labeled directed graph on two vertices with labels and arc labels in
// {0, 1} and at most two arcs; the group count must equal the number of
// distinct encodings.
TEST(TopoBatch, ExhaustiveTwoVertexGraphs) {
  TopoBatch b(2, 1);
  std::vector<LocalArc> all_arcs;
  for (std::uint32_t t = 1; t <= 2; ++t)
    for (std::uint32_t h = 1; h <= 2; ++h)
      for (std::uint32_t l = 0; l <= 1; ++l) all_arcs.push_back({t, h, l});
  std::set<std::vector<std::uint32_t>> distinct;
  std::uint32_t count = 0;
  for (std::uint32_t l1 = 0; l1 <= 1; ++l1)
    for (std::uint32_t l2 = 0; l2 <= 1; ++l2)
      for (std::size_t a = 0; a <= all_arcs.size(); ++a)
        for (std::size_t c = 0; c <= all_arcs.size(); ++c) {
          SmallInstance inst;
          inst.labels = {l1, l2};
          if (a < all_arcs.size()) inst.arcs.push_back(all_arcs[a]);
          if (c < all_arcs.size()) inst.arcs.push_back(all_arcs[c]);
          b.add(inst);
          distinct.insert(tokens(b, count++));
          // Repeat some instances so that groups have duplicates.
          if ((a + c) % 3 == 0) {
            b.add(inst);
            ++count;
          }
        }
  auto groups = b.group();
  EXPECT_EQ(groups.size(), distinct.size());
  std::vector<char> covered(count, 0);
  for (const auto& g : groups) {
    covered[g.canonical]++;
    for (auto d : g.duplicates) {
      covered[d]++;
      EXPECT_EQ(tokens(b, d), tokens(b, g.canonical));
    }
  }
  for (char c : covered) EXPECT_EQ(c, 1);
}

TEST(TopoBatch, RandomCollectionsGroupByEncoding) {
  gen::Rng rng(9);
  TopoBatch b(5, 2);
  std::vector<std::vector<std::uint32_t>> enc;
  for (int i = 0; i < 400; ++i) {
    SmallInstance inst;
    std::uint32_t n = static_cast<std::uint32_t>(rng.range(1, 3));
    for (std::uint32_t v = 0; v < n; ++v) inst.labels.push_back(static_cast<std::uint32_t>(rng.below(2)));
    for (std::uint32_t v = 2; v <= n; ++v) inst.arcs.push_back({static_cast<std::uint32_t>(rng.range(1, v - 1)), v, 0});
    b.add(inst);
    enc.push_back(tokens(b, i));
  }
  auto groups = b.group();
  std::map<std::vector<std::uint32_t>, std::uint32_t> first;
  for (std::uint32_t i = 0; i < enc.size(); ++i) first.emplace(enc[i], i);
  EXPECT_EQ(groups.size(), first.size());
  for (std::size_t k = 1; k < groups.size(); ++k) EXPECT_LT(groups[k - 1].canonical, groups[k].canonical);
  for (const auto& g : groups) {
    EXPECT_EQ(first.at(enc[g.canonical]), g.canonical);
    for (auto d : g.duplicates) EXPECT_EQ(enc[d], enc[g.canonical]);
  }
}

TEST(SolveAndTransfer, IdentitySolver) {
  TopoBatch b(4, 1);
  for (int i = 0; i < 5; ++i) b.add(tree3(i % 2));
  std::vector<std::uint32_t> got(5, 99);
  solve_and_transfer(
      b.group(), [](std::uint32_t id) { return id; }, [&](std::uint32_t id, std::uint32_t sol) { got[id] = sol % 2 == id % 2; });
  for (auto x : got) EXPECT_EQ(x, 1u);
}

TEST(SolveAndTransfer, SolverFailureCarriesInstance) {
  TopoBatch b(4, 1);
  b.add(tree3(0));
  b.add(tree3(1));
  try {
    solve_and_transfer(
        b.group(),
        [](std::uint32_t id) -> int {
          if (id == 1) throw std::runtime_error("boom");
          return 0;
        },
        [](std::uint32_t, int) {});
    FAIL();
  } catch (const TopoBatchError& e) {
    EXPECT_EQ(e.instance(), 1u);
  }
}

// Microtree NCA answers transferred from canonical instances equal a direct
// solve of every instance.
TEST(SolveAndTransfer, MicrotreeNcaMatchesDirectSolve) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Digraph t = gen::random_tree(200, seed, 0.2);
    RootedTree rt = root_tree(t);
    auto q = gen::random_queries(200, 400, seed);
    EXPECT_EQ(nca_linear(rt, q, 4), nca_ahu(rt, q));
  }
}

TEST(RankWithinGroups, Basic) {
  std::vector<std::uint32_t> group{0, 0, 1, 0, 1}, value{5, 2, 9, 5, 1};
  auto r = rank_within_groups(group, value, 2, 9);
  EXPECT_EQ(r, (std::vector<std::uint32_t>{2, 1, 2, 2, 1}));
}

TEST(TopoBatch, GroupingWorkIsLinear) {
  auto work = [](std::size_t k) {
    gen::Rng rng(k);
    TopoBatch b(4, 2);
    for (std::size_t i = 0; i < k; ++i) {
      SmallInstance inst;
      std::uint32_t n = static_cast<std::uint32_t>(rng.range(1, 4));
      for (std::uint32_t v = 0; v < n; ++v) inst.labels.push_back(static_cast<std::uint32_t>(rng.below(4)));
      for (std::uint32_t v = 2; v <= n; ++v) inst.arcs.push_back({static_cast<std::uint32_t>(rng.range(1, v - 1)), v, 0});
      b.add(inst);
    }
    b.group();
    return static_cast<double>(b.counters().sort_work) / static_cast<double>(b.counters().tokens);
  };
  double prev = work(1000);
  for (std::size_t k = 2000; k <= 32000; k *= 2) {
    double cur = work(k);
    EXPECT_LE(cur, 2 * prev);
    prev = cur;
  }
}
