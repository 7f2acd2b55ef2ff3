#include <gtest/gtest.h>

#include <cmath>

#include "unelisa/metrics.hpp"
#include "unelisa/rng.hpp"

using namespace unelisa;

namespace {

double auc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1 || y[j] != -1) continue;
      den += 1.0;
      num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return num / den;
}

PredictionResult from(std::vector<int> labels, std::vector<double> scores) {
  PredictionResult p;
  p.labels = std::move(labels);
  p.scores = std::move(scores);
  return p;
}

}  // namespace

TEST(Recovery, HandCases) {
  auto m = recovery({1, 2, 6}, {1, 2, 3});
  EXPECT_DOUBLE_EQ(m.hit_rate, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
  m = recovery({1, 2, 3}, {1, 2, 3});
  EXPECT_DOUBLE_EQ(m.hit_rate, 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  m = recovery({}, {1, 2, 3});
  EXPECT_DOUBLE_EQ(m.hit_rate, 0.0);
  EXPECT_DOUBLE_EQ(m.precision, 0.0);
  EXPECT_TRUE(m.empty_estimate);
  EXPECT_THROW(recovery({1}, {}), StructuralError);
}

TEST(Classification, FourInstanceCase) {
  const auto m = classification(from({1, -1, -1, -1}, {0.9, 0.4, 0.2, 0.1}), {1, 1, -1, -1});
  EXPECT_DOUBLE_EQ(m.ppv, 1.0);
  EXPECT_DOUBLE_EQ(m.npv, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.f_score, 0.8);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 * 1.0 * 0.5 / 1.5);
  EXPECT_DOUBLE_EQ(m.auc, 1.0);
}

TEST(Classification, PerfectAndConstant) {
  auto m = classification(from({1, 1, -1}, {0.8, 0.7, 0.1}), {1, 1, -1});
  EXPECT_DOUBLE_EQ(m.auc, 1.0);
  EXPECT_DOUBLE_EQ(m.f_score, 1.0);
  m = classification(from({1, 1, 1, 1}, {0.5, 0.5, 0.5, 0.5}), {1, -1, 1, -1});
  EXPECT_DOUBLE_EQ(m.auc, 0.5);
  EXPECT_TRUE(m.npv_undefined);
  EXPECT_DOUBLE_EQ(m.npv, 0.0);
}

TEST(Classification, UndefinedCasesAreFlagged) {
  const auto m = classification(from({-1, -1}, {0.1, 0.2}), {1, 1});
  EXPECT_TRUE(m.auc_undefined);
  EXPECT_TRUE(m.ppv_undefined);
  EXPECT_DOUBLE_EQ(m.ppv, 0.0);
  EXPECT_THROW(classification(from({1}, {0.5}), {1, -1}), StructuralError);
}

TEST(Classification, ThresholdUsesScores) {
  const auto m = classification(from({-1, -1, -1}, {0.9, 0.6, 0.2}), {1, 1, -1}, 0.5);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
}

TEST(Auc, MatchesPairwiseOracle) {
  Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 5 + rng.below(200);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(20)) / 4.0;  // many ties
      y[i] = rng.sign();
    }
    y[0] = 1;
    y[1] = -1;
    EXPECT_NEAR(auc_rank(s, y), auc_pairs(s, y), 1e-12);
  }
}

TEST(Auc, InvariantToMonotoneTransform) {
  Rng rng(2);
  std::vector<double> s(300), t(300);
  std::vector<int> y(300);
  for (std::size_t i = 0; i < 300; ++i) {
    s[i] = rng.uniform01();
    t[i] = std::exp(3.0 * s[i]) - 7.0;
    y[i] = rng.bernoulli(s[i]) ? 1 : -1;
  }
  EXPECT_NEAR(auc_rank(s, y), auc_rank(t, y), 1e-15);
}

TEST(Accuracy, Basic) {
  EXPECT_DOUBLE_EQ(accuracy({1, -1, 1, 1}, {1, 1, 1, -1}), 0.5);
  EXPECT_THROW(accuracy({1}, {1, 1}), StructuralError);
}
