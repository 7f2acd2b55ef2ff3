#include <gtest/gtest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "unelisa/ising_approx.hpp"
#include "unelisa/oracle_enum.hpp"

using namespace unelisa;

namespace {

// Literal four-term formula, no simplification.
double theta_tilde_ref(double a, double b, double t0) {
  const double num = std::exp(a + b + t0) + std::exp(-a - b - t0) + std::exp(a + b - t0) + std::exp(-a - b + t0);
  const double den = std::exp(a - b + t0) + std::exp(-a + b - t0) + std::exp(a - b - t0) + std::exp(-a + b + t0);
  return 0.5 * std::log(num / den);
}

}  // namespace

TEST(ThetaTildePair, KnownValue) {
  EXPECT_NEAR(theta_tilde_pair(1.0, 1.0, 0.0), 0.5 * std::log(std::cosh(2.0)), 1e-12);
  EXPECT_NEAR(theta_tilde_pair(1.0, 1.0, 0.0), 0.66251, 1e-5);
}

TEST(ThetaTildePair, ZeroAndAntisymmetry) {
  EXPECT_EQ(theta_tilde_pair(0.0, 0.8, 0.3), 0.0);
  EXPECT_NEAR(theta_tilde_pair(1.0, -1.0, 0.0), -theta_tilde_pair(1.0, 1.0, 0.0), 1e-14);
  EXPECT_NEAR(theta_tilde_pair(-0.7, 1.3, 0.2), theta_tilde_pair(1.3, -0.7, 0.2), 1e-14);
}

TEST(ThetaTildePair, MatchesLiteralFormula) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double a = 6 * rng.uniform01() - 3;
    const double b = 6 * rng.uniform01() - 3;
    const double t0 = 4 * rng.uniform01() - 2;
    EXPECT_NEAR(theta_tilde_pair(a, b, t0), theta_tilde_ref(a, b, t0), 1e-12);
  }
}

TEST(ThetaTildePair, TanhIdentity) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const double a = 6 * rng.uniform01() - 3;
    const double b = 6 * rng.uniform01() - 3;
    EXPECT_NEAR(std::tanh(theta_tilde_pair(a, b, 0.4)), std::tanh(a) * std::tanh(b), 1e-12);
  }
}

TEST(ThetaTildePair, SignLaw) {
  for (double a = -3.0; a <= 3.0; a += 0.25) {
    for (double b = -3.0; b <= 3.0; b += 0.25) {
      const double v = theta_tilde_pair(a, b, 0.5);
      const int expected = (a > 0) == (b > 0) ? 1 : -1;
      if (a == 0.0 || b == 0.0) {
        EXPECT_EQ(v, 0.0);
      } else {
        EXPECT_EQ(v > 0 ? 1 : -1, expected) << a << " " << b;
      }
    }
  }
}

TEST(ThetaTildePair, MonotoneInEachArgument) {
  const double b = 0.9;
  double prev = theta_tilde_pair(-3.0, b, 0.0);
  for (double a = -2.9; a <= 3.0; a += 0.1) {
    const double v = theta_tilde_pair(a, b, 0.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Approximate, FigureOneNeighborhoods) {
  const auto m = approximate(fixtures::figure1_graph());
  const auto nbrs = m.neighborhoods();
  EXPECT_EQ(nbrs.of(1), (NodeSet{2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(nbrs.of(8), (NodeSet{2, 3, 5}));
  EXPECT_EQ(nbrs.of(17), (NodeSet{16}));
  EXPECT_NEAR(m.weight(1, 2), 0.5 * std::log(std::cosh(2.0)), 1e-12);
  EXPECT_DOUBLE_EQ(m.weight(2, 8), 0.5);
  EXPECT_EQ(m.weight(6, 8), 0.0);
}

TEST(Approximate, SingleExpertAddsNothing) {
  const auto g = IsingModelSpec::from_edges(3, 0.2, {{{0, 1}, 1.0}, {{2, 3}, 0.5}});
  const auto m = approximate(g);
  EXPECT_EQ(m.theta_tilde.size(), 1u);
  EXPECT_TRUE(m.neighborhoods().of(1).empty());
}

TEST(Approximate, InducedSignsFollowExpertSigns) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto g = fixtures::random_valid_spec(12, 5, seed);
    const auto m = approximate(g);
    for (NodeId s : g.expert_set) {
      for (NodeId t : g.expert_set) {
        if (s >= t) continue;
        EXPECT_EQ(sign_pos(m.weight(s, t)), sign_pos(g.weight(0, s) * g.weight(0, t)));
      }
    }
  }
}

TEST(Approximate, ThetaZeroDoesNotMatter) {
  auto g = fixtures::random_valid_spec(8, 4, 3);
  const auto a = approximate(g);
  g.theta0 = 2.5;
  const auto b = approximate(g);
  for (const auto& [e, w] : a.theta_tilde) EXPECT_NEAR(b.weight(e.first, e.second), w, 1e-12);
}

TEST(Approximate, TwoExpertMomentMatchesExactly) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const double a = rng.sign() * (0.2 + 1.5 * rng.uniform01());
    const double b = rng.sign() * (0.2 + 1.5 * rng.uniform01());
    const double t0 = rng.uniform01() - 0.5;
    const auto g = IsingModelSpec::from_edges(2, t0, {{{0, 1}, a}, {{0, 2}, b}});
    const double exact = pair_moment(enumerate(g), 1, 2);
    const double approx = pair_moment(enumerate(approximate(g).to_pairwise()), 1, 2);
    EXPECT_NEAR(approx, exact, 1e-12);
  }
}

TEST(Approximate, RejectsExpertExpertEdge) {
  const auto g = IsingModelSpec::from_edges(4, 0.0, {{{0, 2}, 1.0}, {{0, 3}, 1.0}, {{2, 3}, 0.5}});
  EXPECT_THROW(approximate(g), StructuralError);
}

TEST(Approximate, ToleratesG1Violation) {
  // Two experts; node 3 has degree 3 so node 0 does not dominate.
  const auto g = IsingModelSpec::from_edges(6, 0.0, {{{0, 1}, 1.0}, {{0, 2}, 1.0}, {{3, 4}, 0.5}, {{3, 5}, 0.5}, {{3, 6}, 0.5}});
  ASSERT_FALSE(validate_model(g).empty());
  EXPECT_NO_THROW(approximate(g));
}

TEST(Approximate, ToSpecRoundTrip) {
  const auto m = approximate(fixtures::figure1_graph());
  const auto s = m.to_spec();
  EXPECT_EQ(s.p, 18);
  EXPECT_EQ(s.edges.size(), m.theta_tilde.size());
  for (const auto& [e, w] : m.theta_tilde) EXPECT_DOUBLE_EQ(s.weight(e.first, e.second), w);
}

TEST(SignPartition, SplitsTwoCamps) {
  // Nodes 1,2,3 positive, 4,5 negative.
  const std::vector<int> z{1, 1, 1, -1, -1};
  std::vector<std::vector<int>> m(5, std::vector<int>(5, 0));
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) m[i][j] = i == j ? 0 : z[i] * z[j];
  }
  const auto part = sign_partition({1, 2, 3, 4, 5}, m);
  EXPECT_EQ(part.group_a, (NodeSet{1, 2, 3}));
  EXPECT_EQ(part.group_b, (NodeSet{4, 5}));
}

TEST(SignPartition, AllPositiveIsOneGroup) {
  std::vector<std::vector<int>> m(4, std::vector<int>(4, 1));
  for (int i = 0; i < 4; ++i) m[i][i] = 0;
  const auto part = sign_partition({2, 4, 6, 8}, m);
  EXPECT_EQ(part.group_a.size(), 4u);
  EXPECT_TRUE(part.group_b.empty());
}

TEST(SignPartition, RejectsBadMatrices) {
  EXPECT_THROW(sign_partition({}, {}), StructuralError);
  EXPECT_THROW(sign_partition({1, 2}, {{0, 1}, {-1, 0}}), StructuralError);
  EXPECT_THROW(sign_partition({1, 2}, {{1, 1}, {1, 0}}), StructuralError);
  EXPECT_THROW(sign_partition({1, 2}, {{0, 2}, {2, 0}}), StructuralError);
}

TEST(SignPartition, RecoversRandomSigns) {
  Rng rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 3 + static_cast<int>(rng.below(8));
    std::vector<int> z(k);
    std::vector<NodeId> nodes(k);
    for (int i = 0; i < k; ++i) {
      z[i] = rng.sign();
      nodes[i] = i + 1;
    }
    std::vector<std::vector<int>> m(k, std::vector<int>(k, 0));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) m[i][j] = i == j ? 0 : z[i] * z[j];
    }
    const auto part = sign_partition(nodes, m);
    NodeSet same, other;
    for (int i = 0; i < k; ++i) (z[i] == z[0] ? same : other).insert(nodes[i]);
    EXPECT_EQ(part.group_a, same);
    EXPECT_EQ(part.group_b, other);
  }
}
