#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "unelisa/baselines.hpp"
#include "unelisa/metrics.hpp"

using namespace unelisa;

namespace {

LabelMatrix rows(const std::vector<std::vector<int>>& r) {
  std::vector<int> v;
  for (const auto& row : r) v.insert(v.end(), row.begin(), row.end());
  return LabelMatrix(r.size(), r.front().size(), v);
}

// Conditionally independent symmetric classifiers on balanced truth.
LabelMatrix independent(const std::vector<double>& acc, std::size_t n, std::uint64_t seed, std::vector<int>& truth) {
  Rng rng(seed);
  truth.assign(n, 0);
  std::vector<int> v;
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = rng.sign();
    for (double a : acc) v.push_back(rng.bernoulli(a) ? truth[i] : -truth[i]);
  }
  return LabelMatrix(n, acc.size(), v);
}

}  // namespace

TEST(MajorityVote, Rows) {
  const auto pred = majority_vote(rows({{1, 1, -1}, {-1, -1, -1}, {1, -1, 1}}));
  EXPECT_EQ(pred.labels, (std::vector<int>{1, -1, 1}));
  EXPECT_EQ(majority_vote(rows({{1, -1}})).labels[0], 1);
  EXPECT_NEAR(pred.scores[0], 2.0 / 3.0, 1e-15);
}

TEST(DawidSkene, ReplicatedPerfectClassifier) {
  Rng rng(1);
  std::vector<int> truth(1000);
  for (int& t : truth) t = rng.sign();
  std::vector<int> v;
  for (int t : truth) v.insert(v.end(), {t, t, t});
  const auto fit = dawid_skene(LabelMatrix(1000, 3, v));
  EXPECT_EQ(fit.prediction.labels, truth);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_DOUBLE_EQ(fit.params.sensitivity[s], 1.0 - 1e-6);
    EXPECT_DOUBLE_EQ(fit.params.specificity[s], 1.0 - 1e-6);
  }
}

TEST(DawidSkene, RandomClassifiersAreChance) {
  std::vector<int> truth;
  const auto y = independent({0.5, 0.5, 0.5, 0.5, 0.5}, 2000, 2, truth);
  EXPECT_NEAR(accuracy(dawid_skene(y).prediction.labels, truth), 0.5, 0.05);
}

// A label matrix needs two columns; two copies of one classifier stand in for
// the single-classifier case.
TEST(DawidSkene, DuplicatedClassifierIsEcho) {
  std::vector<int> truth;
  const auto base = independent({0.8, 0.5}, 500, 3, truth);
  std::vector<int> v;
  for (std::size_t i = 0; i < 500; ++i) v.insert(v.end(), {base(i, 0), base(i, 0)});
  EXPECT_EQ(dawid_skene(LabelMatrix(500, 2, v)).prediction.labels, base.column(0));
}

TEST(DawidSkene, LikelihoodNeverDecreases) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<int> truth;
    const auto y = independent({0.9, 0.75, 0.6, 0.55, 0.7}, 600, seed, truth);
    const auto fit = dawid_skene(y);
    for (std::size_t k = 1; k < fit.log_likelihood_history.size(); ++k) {
      EXPECT_GE(fit.log_likelihood_history[k] - fit.log_likelihood_history[k - 1], -1e-10);
    }
    EXPECT_GT(accuracy(fit.prediction.labels, truth), 0.85);
  }
}

TEST(DawidSkene, MinorityFlipIsResolved) {
  std::vector<int> truth;
  auto y = independent({0.9, 0.85, 0.8}, 800, 4, truth);
  std::vector<int> v = y.values();
  for (int& x : v) x = -x;
  const auto fit = dawid_skene(LabelMatrix(800, 3, v));
  // Every classifier is now worse than chance; the labelling that makes them
  // better than chance is kept, which inverts truth.
  EXPECT_LT(accuracy(fit.prediction.labels, truth), 0.1);
}

TEST(Sml, WeightsFollowAccuracy) {
  const std::vector<double> acc{0.9, 0.8, 0.6};
  std::vector<int> truth;
  const auto y = independent(acc, 20000, 5, truth);
  const auto fit = sml(y);
  ASSERT_FALSE(fit.degenerate);
  EXPECT_GT(fit.weights[0], fit.weights[1]);
  EXPECT_GT(fit.weights[1], fit.weights[2]);
  EXPECT_GT(fit.weights[2], 0.0);

  // Population covariance is rank one off the diagonal: (2a_s - 1)(2a_t - 1).
  Eigen::Matrix3d cov;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) cov(a, b) = (2 * acc[a] - 1) * (2 * acc[b] - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Eigen::Vector3d v = es.eigenvectors().col(2);
  if (v.sum() < 0) v = -v;
  EXPECT_GT(v(0), v(1));
  EXPECT_GT(v(1), v(2));
  // Twenty completion passes leave a small bias on the diagonal.
  for (int s = 0; s < 3; ++s) EXPECT_NEAR(fit.weights[s], v(s), 0.05);
}

TEST(Sml, DuplicatesGetEqualWeight) {
  std::vector<int> truth;
  const auto base = independent({0.8, 0.5}, 1000, 6, truth);
  std::vector<int> v;
  for (std::size_t i = 0; i < 1000; ++i) v.insert(v.end(), {base(i, 0), base(i, 0), base(i, 0)});
  const auto fit = sml(LabelMatrix(1000, 3, v));
  EXPECT_NEAR(fit.weights[0], fit.weights[1], 1e-6);
  EXPECT_NEAR(fit.weights[1], fit.weights[2], 1e-6);
}

TEST(Sml, UnitNormAndChanceOnNoise) {
  std::vector<int> truth;
  const auto y = independent({0.5, 0.5, 0.5, 0.5}, 2000, 7, truth);
  const auto fit = sml(y);
  double nrm = 0.0;
  for (double w : fit.weights) nrm += w * w;
  EXPECT_NEAR(nrm, 1.0, 1e-9);
  EXPECT_NEAR(accuracy(fit.prediction.labels, truth), 0.5, 0.05);
  for (double s : fit.prediction.scores) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Sml, DegenerateFallsBack) {
  const auto fit = sml(rows({{1, 1, 1}, {1, 1, 1}}));
  EXPECT_TRUE(fit.degenerate);
  EXPECT_TRUE(fit.prediction.flagged("degenerate_covariance"));
  EXPECT_THROW(sml(rows({{1, -1}})), StructuralError);
}

TEST(Baselines, RowOrderInvariance) {
  std::vector<int> truth;
  const auto y = independent({0.9, 0.7, 0.65, 0.6}, 300, 8, truth);
  std::vector<int> v;
  for (std::size_t i = y.n(); i-- > 0;) {
    for (std::size_t s = 0; s < y.p(); ++s) v.push_back(y(i, s));
  }
  const LabelMatrix r(y.n(), y.p(), v);
  const auto a = dawid_skene(y).prediction.labels;
  const auto b = dawid_skene(r).prediction.labels;
  const auto c = sml(y).prediction.labels;
  const auto d = sml(r).prediction.labels;
  for (std::size_t i = 0; i < y.n(); ++i) {
    EXPECT_EQ(a[i], b[y.n() - 1 - i]);
    EXPECT_EQ(c[i], d[y.n() - 1 - i]);
  }
}
