#include <gtest/gtest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "unelisa/gibbs.hpp"
#include "unelisa/oracle_enum.hpp"

using namespace unelisa;

namespace {

double column_mean(const LabelMatrix& y, NodeId s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.n(); ++i) acc += y.node(i, s);
  return acc / static_cast<double>(y.n());
}

double column_product_mean(const LabelMatrix& y, NodeId s, NodeId t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.n(); ++i) acc += y.node(i, s) * y.node(i, t);
  return acc / static_cast<double>(y.n());
}

GibbsConfig config(int n, std::uint64_t seed) {
  GibbsConfig cfg;
  cfg.n_samples = n;
  cfg.seed = seed;
  cfg.burn_in_sweeps = 200;
  return cfg;
}

}  // namespace

TEST(Gibbs, ZeroWeightsAreUnbiased) {
  IsingModelSpec g;
  g.p = 4;
  const auto y = sample(g, config(10000, 1));
  ASSERT_EQ(y.n(), 10000u);
  ASSERT_EQ(y.p(), 4u);
  for (NodeId s = 1; s <= 4; ++s) EXPECT_LT(std::abs(column_mean(y, s)), 0.05);
}

TEST(Gibbs, ChainMoments) {
  // 0 - 1 - 2 with unit weights: E[f0 f1] = E[f1 f2] = tanh 1, E[f0 f2] = tanh^2 1.
  const auto g = IsingModelSpec::from_edges(2, 0.0, {{{0, 1}, 1.0}, {{1, 2}, 1.0}});
  const auto y = sample(g, config(50000, 2));
  const auto& truth = *y.truth();
  double m01 = 0.0, m02 = 0.0;
  for (std::size_t i = 0; i < y.n(); ++i) {
    m01 += truth[i] * y.node(i, 1);
    m02 += truth[i] * y.node(i, 2);
  }
  m01 /= static_cast<double>(y.n());
  m02 /= static_cast<double>(y.n());
  EXPECT_NEAR(m01, std::tanh(1.0), 0.02);
  EXPECT_NEAR(column_product_mean(y, 1, 2), std::tanh(1.0), 0.02);
  EXPECT_NEAR(m02, std::tanh(1.0) * std::tanh(1.0), 0.02);
}

TEST(Gibbs, SingleNodeField) {
  PairwiseIsing m(1, 0);
  m.field[0] = 0.5;
  const auto states = sample_states(m, config(20000, 3));
  double plus = 0.0;
  for (const auto& y : states) plus += y[0] == 1 ? 1.0 : 0.0;
  EXPECT_NEAR(plus / static_cast<double>(states.size()), 1.0 / (1.0 + std::exp(-1.0)), 0.01);
}

TEST(Gibbs, TotalVariationAgainstEnumeration) {
  const auto g = fixtures::random_valid_spec(4, 3, 17, 0.3, 1.0);
  const auto exact = enumerate(g);
  const auto y = sample(g, config(100000, 4));
  std::vector<double> freq(exact.num_states(), 0.0);
  const auto& truth = *y.truth();
  for (std::size_t i = 0; i < y.n(); ++i) {
    std::vector<int> state{truth[i]};
    for (NodeId s = 1; s <= 4; ++s) state.push_back(y.node(i, s));
    freq[exact.index_of(state)] += 1.0 / static_cast<double>(y.n());
  }
  double tv = 0.0;
  for (std::size_t x = 0; x < freq.size(); ++x) tv += 0.5 * std::abs(freq[x] - exact.pmf[x]);
  EXPECT_LT(tv, 0.03);
}

TEST(Gibbs, SameSeedSameSamples) {
  const auto g = fixtures::figure1_graph();
  const auto a = sample(g, config(500, 7));
  const auto b = sample(g, config(500, 7));
  const auto c = sample(g, config(500, 8));
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(*a.truth(), *b.truth());
  EXPECT_NE(a.values(), c.values());
}

TEST(Gibbs, MultipleChainsAreDeterministic) {
  const auto g = fixtures::figure1_graph();
  auto cfg = config(400, 9);
  cfg.chains = 3;
  const auto a = sample(g, cfg);
  const auto b = sample(g, cfg);
  EXPECT_EQ(a.n(), 400u);
  EXPECT_EQ(a.values(), b.values());
}

TEST(Gibbs, RandomOrderMatchesMoments) {
  const auto g = IsingModelSpec::from_edges(2, 0.0, {{{0, 1}, 0.8}, {{0, 2}, 0.8}});
  auto cfg = config(40000, 10);
  cfg.update_order = UpdateOrder::random_permutation;
  const auto y = sample(g, cfg);
  EXPECT_NEAR(column_product_mean(y, 1, 2), std::tanh(0.8) * std::tanh(0.8), 0.02);
}

TEST(Gibbs, RejectsBadConfig) {
  const auto g = fixtures::figure1_graph();
  auto cfg = config(10, 1);
  cfg.n_samples = 0;
  EXPECT_THROW(sample(g, cfg), StructuralError);
  cfg = config(10, 1);
  cfg.thin_site_updates = 0;
  EXPECT_THROW(sample(g, cfg), StructuralError);
  cfg = config(10, 1);
  cfg.burn_in_sweeps = -1;
  EXPECT_THROW(sample(g, cfg), StructuralError);
  IsingModelSpec one;
  one.p = 1;
  EXPECT_THROW(sample(one, config(10, 1)), StructuralError);
}

TEST(Gibbs, ObservedSamplerOnApproxModel) {
  PairwiseIsing m(2, 1);
  m.add_coupling(1, 2, 0.5);
  const auto y = sample_observed(m, config(20000, 11));
  EXPECT_FALSE(y.has_truth());
  EXPECT_NEAR(column_product_mean(y, 1, 2), std::tanh(0.5), 0.03);
}
