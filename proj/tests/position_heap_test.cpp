#include "subsse/position_heap.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace subsse {
namespace {

using ::subsse::testing::naive_positions;
using ::subsse::testing::random_string;

TEST(PositionHeapTest, WorkedExampleCandidates) {
  const auto heap = PositionHeap::build("bbabbbaaba");
  const auto c = heap.search_candidates("bb");
  EXPECT_EQ(c.l1, (std::vector<std::size_t>{9}));
  // Preorder of the final node's subtree, children in edge order.
  EXPECT_EQ(c.l2, (std::vector<std::size_t>{5, 1, 4}));
}

TEST(PositionHeapTest, WorkedExampleFiltersFalseCandidate) {
  const auto heap = PositionHeap::build("bbabbbaaba");
  EXPECT_EQ(heap.search("bb"), (std::set<std::size_t>{1, 4, 5}));
}

TEST(PositionHeapTest, AbsentSymbol) {
  const auto heap = PositionHeap::build("bbabbbaaba");
  EXPECT_TRUE(heap.search("z").empty());
  const auto c = heap.search_candidates("z");
  EXPECT_TRUE(c.l1.empty());
  EXPECT_TRUE(c.l2.empty());
}

TEST(PositionHeapTest, SingleSymbol) {
  const auto heap = PositionHeap::build("a");
  ASSERT_EQ(heap.node_count(), 2u);
  const auto& child = heap.nodes()[heap.child(PositionHeap::kRoot, 'a')];
  EXPECT_EQ(child.pos, 1u);
  const auto c = heap.search_candidates("a");
  EXPECT_TRUE(c.l1.empty());
  EXPECT_EQ(c.l2, (std::vector<std::size_t>{1}));
}

TEST(PositionHeapTest, TwoSymbolsRightToLeft) {
  // "b" is inserted first (pos 2), then "ab" finds no 'a' child (pos 1).
  const auto heap = PositionHeap::build("ab");
  ASSERT_EQ(heap.node_count(), 3u);
  const auto& root = heap.nodes()[PositionHeap::kRoot];
  ASSERT_EQ(root.children.size(), 2u);
  EXPECT_EQ(heap.nodes()[heap.child(PositionHeap::kRoot, 'b')].pos, 2u);
  EXPECT_EQ(heap.nodes()[heap.child(PositionHeap::kRoot, 'a')].pos, 1u);
  EXPECT_EQ(heap.dump(), "0 - -\n  1 a 1\n  1 b 2\n");
}

TEST(PositionHeapTest, EmptyText) {
  const auto heap = PositionHeap::build("");
  EXPECT_EQ(heap.node_count(), 1u);
  EXPECT_TRUE(heap.search("a").empty());
}

TEST(PositionHeapTest, CandidatePastEndIsRejected) {
  // Node for position 3 ("a") lies on the path of "ab" but "ab" cannot
  // start at the last position.
  const auto heap = PositionHeap::build("aba");
  EXPECT_EQ(heap.search("ab"), (std::set<std::size_t>{1}));
  EXPECT_EQ(heap.search("abab"), (std::set<std::size_t>{}));
}

TEST(PositionHeapTest, RandomStructuralInvariants) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> len(0, 60);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string t = random_string(rng, len(rng), trial % 2 == 0 ? "ab" : "abcd");
    const auto heap = PositionHeap::build(t);
    ASSERT_EQ(heap.node_count(), t.size() + 1);
    std::set<std::size_t> positions;
    for (std::size_t id = 1; id < heap.node_count(); ++id) {
      const auto& n = heap.nodes()[id];
      positions.insert(n.pos);
      // Root-to-node edges spell t[pos : pos + depth - 1].
      ASSERT_EQ(heap.path_of(id), t.substr(n.pos - 1, n.depth)) << "text " << t;
    }
    EXPECT_EQ(positions.size(), t.size());
    if (!t.empty()) {
      EXPECT_EQ(*positions.begin(), 1u);
      EXPECT_EQ(*positions.rbegin(), t.size());
    }
  }
}

TEST(PositionHeapTest, RandomSearchMatchesNaiveScan) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> text_len(0, 80);
  std::uniform_int_distribution<std::size_t> pat_len(1, 5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string t = random_string(rng, text_len(rng), "ab");
    const auto heap = PositionHeap::build(t);
    for (int q = 0; q < 20; ++q) {
      const std::string s = random_string(rng, pat_len(rng), "ab");
      const auto expected = naive_positions(t, s);
      ASSERT_EQ(heap.search(s), expected) << "text " << t << " pattern " << s;

      const auto c = heap.search_candidates(s);
      EXPECT_LE(c.l1.size(), s.size());
      for (const auto p : c.l2) EXPECT_TRUE(expected.count(p)) << "L2 holds a false match";
      std::set<std::size_t> all(c.l1.begin(), c.l1.end());
      all.insert(c.l2.begin(), c.l2.end());
      for (const auto p : expected) EXPECT_TRUE(all.count(p)) << "candidates miss an occurrence";
    }
  }
}

}  // namespace
}  // namespace subsse
