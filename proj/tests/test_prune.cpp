#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "support/fixtures.hpp"
#include "unelisa/harness.hpp"
#include "unelisa/ising_approx.hpp"
#include "unelisa/prune.hpp"

using namespace unelisa;

namespace {

NeighborhoodMap from_lists(int p, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  NeighborhoodMap m(p);
  for (const auto& [s, t] : edges) {
    m.add(s, t, 1.0);
    m.add(t, s, 1.0);
  }
  return m;
}

NodeSet knots_of(const NeighborhoodMap& m) {
  NodeSet out;
  for (const auto& c : knot_set(m)) {
    if (c.knot) out.insert(c.node);
  }
  return out;
}

// Relabels spec nodes 1..p by perm (perm[s-1] is the new id of s).
IsingModelSpec relabel(const IsingModelSpec& g, const std::vector<NodeId>& perm) {
  std::map<Edge, double> edges;
  auto f = [&](NodeId s) { return s == 0 ? 0 : perm[static_cast<std::size_t>(s - 1)]; };
  for (const auto& [e, w] : g.edges) edges[make_edge(f(e.first), f(e.second))] = w;
  return IsingModelSpec::from_edges(g.p, g.theta0, edges);
}

}  // namespace

TEST(KnotSet, FigureOne) {
  const auto nb = approximate(fixtures::figure1_graph()).neighborhoods();
  EXPECT_EQ(knots_of(nb), (NodeSet{1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 16}));
  const auto cands = knot_set(nb);
  EXPECT_EQ(cands[7].node, 8);
  EXPECT_EQ(cands[7].intersection, (NodeSet{1, 4, 8}));
  EXPECT_FALSE(cands[7].knot);
}

TEST(KnotSet, StarCenterIsKnot) {
  const auto nb = from_lists(18, {{16, 17}, {16, 18}});
  const auto cands = knot_set(nb);
  EXPECT_EQ(cands[15].intersection, (NodeSet{16}));
  EXPECT_TRUE(cands[15].knot);
  EXPECT_FALSE(cands[16].knot);
  EXPECT_TRUE(cands[0].empty_neighborhood);
  EXPECT_FALSE(cands[0].knot);
}

TEST(Reconstruct, FigureOne) {
  const auto res = reconstruct_n0(approximate(fixtures::figure1_graph()).neighborhoods());
  EXPECT_EQ(res.report.expert_set_hat, (NodeSet{1, 2, 3, 4, 5}));
  std::vector<std::size_t> sizes;
  for (const auto& k : res.table.knots) sizes.push_back(k.size);
  EXPECT_EQ(sizes, (std::vector<std::size_t>{6, 6, 6, 5, 4, 3, 3, 3, 2, 2, 2, 2}));
  for (std::size_t i = 0; i < res.table.knots.size(); ++i) {
    const auto& k = res.table.knots[i];
    EXPECT_EQ(k.rank, i + 1);
    EXPECT_EQ(k.selected, k.size + 1 >= k.rank);
  }
  EXPECT_FALSE(res.report.empty_flag);
}

TEST(Reconstruct, EmptyNeighborhoodsAreFlagged) {
  const auto res = reconstruct_n0(NeighborhoodMap(6));
  EXPECT_TRUE(res.report.expert_set_hat.empty());
  EXPECT_TRUE(res.report.empty_flag);
  EXPECT_TRUE(res.no_knots);
}

TEST(Reconstruct, SingleStar) {
  const auto res = reconstruct_n0(from_lists(3, {{1, 2}, {1, 3}}));
  ASSERT_EQ(res.table.knots.size(), 1u);
  EXPECT_EQ(res.table.knots[0].node, 1);
  EXPECT_EQ(res.report.expert_set_hat, (NodeSet{1}));
}

TEST(Reconstruct, TiesBrokenByNodeId) {
  // Two disjoint stars of equal size: 2 and 5 tie.
  const auto res = reconstruct_n0(from_lists(6, {{2, 1}, {2, 3}, {5, 4}, {5, 6}}));
  ASSERT_EQ(res.table.knots.size(), 2u);
  EXPECT_EQ(res.table.knots[0].node, 2);
  EXPECT_EQ(res.table.knots[1].node, 5);
}

TEST(Reconstruct, ExactNeighborhoodsOfRandomGraphs) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Rng rng(seed);
    const int p = 8 + static_cast<int>(rng.below(23));
    const int d0 = 3 + static_cast<int>(rng.below(4));
    const auto g = generate_graph(p, d0, static_cast<Snr>(rng.below(3)), seed);
    const auto res = reconstruct_n0(approximate(g).neighborhoods());
    EXPECT_EQ(res.report.expert_set_hat, g.expert_set) << "seed " << seed;
    ++checked;
  }
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto g = fixtures::random_valid_spec(20, 5, seed);
    EXPECT_EQ(reconstruct_n0(approximate(g).neighborhoods()).report.expert_set_hat, g.expert_set);
    ++checked;
  }
  EXPECT_GE(checked, 50);
}

TEST(Reconstruct, PermutationEquivariance) {
  const auto g = fixtures::figure1_graph();
  std::vector<NodeId> perm(18);
  std::iota(perm.begin(), perm.end(), 1);
  std::mt19937_64 eng(4);
  std::shuffle(perm.begin(), perm.end(), eng);
  const auto h = relabel(g, perm);
  const auto a = reconstruct_n0(approximate(g).neighborhoods()).report.expert_set_hat;
  const auto b = reconstruct_n0(approximate(h).neighborhoods()).report.expert_set_hat;
  NodeSet mapped;
  for (NodeId s : a) mapped.insert(perm[static_cast<std::size_t>(s - 1)]);
  EXPECT_EQ(b, mapped);
  EXPECT_EQ(b, h.expert_set);
}
