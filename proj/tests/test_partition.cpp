#include <gtest/gtest.h>

#include <map>
#include <set>

#include "treepath/generators.hpp"
#include "treepath/partition.hpp"

using namespace treepath;

namespace {

RootedTree path_tree(std::size_t n) {
  std::vector<Vertex> parent(n + 1, kNone);
  for (Vertex v = 2; v <= n; ++v) parent[v] = v - 1;
  return RootedTree(parent);
}

RootedTree star_tree(std::size_t leaves) {
  std::vector<Vertex> parent(leaves + 2, 1);
  parent[0] = parent[1] = kNone;
  return RootedTree(parent);
}

RootedTree complete_binary(std::size_t n) {
  std::vector<Vertex> parent(n + 1, kNone);
  for (Vertex v = 2; v <= n; ++v) parent[v] = v / 2;
  return RootedTree(parent);
}

std::size_t subtree_count(const RootedTree& t, Vertex v) {
  std::size_t c = 0;
  for (Vertex x = 1; x <= t.n(); ++x) c += t.ancestor(v, x);
  return c;
}

}  // namespace

TEST(FringeCore, PathOfTen) {
  TreePartition p = fringe_core(path_tree(10), 3);
  for (Vertex v = 1; v <= 7; ++v) EXPECT_TRUE(p.is_core(v));
  for (Vertex v = 8; v <= 10; ++v) EXPECT_EQ(p.micro[v], 8u);
  EXPECT_EQ(p.micro_roots, std::vector<Vertex>{8});
}

TEST(FringeCore, Star) {
  TreePartition p = fringe_core(star_tree(5), 3);
  EXPECT_TRUE(p.is_core(1));
  for (Vertex v = 2; v <= 6; ++v) EXPECT_EQ(p.micro[v], v);
}

TEST(FringeCore, DefinitionOnRandomTrees) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RootedTree t = root_tree(gen::random_tree(500, seed, 0.5));
    for (std::size_t g : {1u, 2u, 3u, 5u, 8u}) {
      TreePartition p = fringe_core(t, g);
      for (Vertex v = 1; v <= t.n(); ++v) {
        std::size_t s = subtree_count(t, v);
        bool root = s <= g && (t.parent(v) == kNone || subtree_count(t, t.parent(v)) > g);
        EXPECT_EQ(p.micro[v] == v, root);
        EXPECT_EQ(p.is_core(v), s > g);
        if (!p.is_core(v)) EXPECT_TRUE(t.ancestor(p.micro[v], v));
      }
    }
  }
}

TEST(LeftPaths, SinglePathCore) {
  TreePartition p = fringe_core_paths(path_tree(10), 3);
  ASSERT_EQ(p.paths.size(), 1u);
  EXPECT_EQ(p.paths[0].top, 1u);
  EXPECT_EQ(p.paths[0].bottom, 7u);
}

TEST(LeftPaths, CompleteBinaryCore) {
  // 15 nodes with g = 1: the 8 leaves are fringe, the core is a complete
  // binary tree of 7 nodes.
  TreePartition p = fringe_core_paths(complete_binary(15), 1);
  ASSERT_EQ(p.paths.size(), 4u);
  EXPECT_EQ(p.paths[0].members, (std::vector<Vertex>{1, 2, 4}));
}

TEST(LeftPaths, RandomTreesPartitionTheCore) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RootedTree t = root_tree(gen::random_tree(300, seed, 0.4));
    for (std::size_t g : {1u, 2u, 4u}) {
      TreePartition p = fringe_core_paths(t, g);
      std::size_t core_leaves = 0, core = 0;
      for (Vertex v = 1; v <= t.n(); ++v) {
        if (!p.is_core(v)) continue;
        ++core;
        bool leaf = true;
        for (Vertex c : t.children(v)) leaf &= !p.is_core(c);
        core_leaves += leaf;
      }
      EXPECT_LE(p.paths.size(), core_leaves);
      EXPECT_LE(p.paths.size() * (g + 1), t.n());
      std::size_t covered = 0;
      for (const LeftPath& path : p.paths) {
        covered += path.members.size();
        EXPECT_EQ(path.members.front(), path.top);
        EXPECT_EQ(path.members.back(), path.bottom);
        for (std::size_t k = 1; k < path.members.size(); ++k) {
          Vertex v = path.members[k], u = t.parent(v);
          EXPECT_EQ(u, path.members[k - 1]);
          // Every child of u before v is fringe.
          for (Vertex c : t.children(u)) {
            if (c == v) break;
            EXPECT_FALSE(p.is_core(c));
          }
        }
      }
      EXPECT_EQ(covered, core);
    }
  }
}

TEST(FullPartition, PathOfTen) {
  FullPartition p = full_partition(path_tree(10), 3);
  std::vector<std::size_t> sizes;
  for (Vertex r : p.roots) {
    std::size_t c = 0;
    for (Vertex v = 1; v <= 10; ++v) c += p.micro[v] == r;
    sizes.push_back(c);
  }
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 3, 3, 3}));
}

TEST(FullPartition, SmallTreeIsOneMicrotree) {
  FullPartition p = full_partition(root_tree(gen::random_tree(6, 2)), 8);
  EXPECT_EQ(p.roots.size(), 1u);
  for (Vertex v = 1; v <= 6; ++v) EXPECT_FALSE(p.marked[v]);
}

TEST(FullPartition, RandomTreesAreCoveredByConnectedMicrotrees) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RootedTree t = root_tree(gen::random_tree(400, seed, 0.3));
    for (std::size_t g : {1u, 2u, 3u, 4u, 7u}) {
      FullPartition p = full_partition(t, g);
      std::map<Vertex, std::size_t> size;
      std::set<Vertex> marked_parents;
      for (Vertex v = 1; v <= t.n(); ++v) {
        ++size[p.micro[v]];
        if (v == p.micro[v]) EXPECT_TRUE(v == t.root() || p.marked[v]);
        else EXPECT_EQ(p.micro[t.parent(v)], p.micro[v]);
        if (p.marked[v]) marked_parents.insert(t.parent(v));
      }
      EXPECT_EQ(size.size(), p.roots.size());
      for (auto [r, s] : size) EXPECT_LE(s, g);
      EXPECT_LE(marked_parents.size() * g, t.n());
      EXPECT_EQ(full_partition(t, g).micro, p.micro);
    }
  }
}
