#include <gtest/gtest.h>

#include <algorithm>

#include "support/fixtures.hpp"
#include "unelisa/core.hpp"

using namespace unelisa;

namespace {

bool has_violation(const std::vector<Violation>& vs, const std::string& prop) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.property == prop; });
}

}  // namespace

TEST(LabelMatrix, RejectsEntriesOutsidePlusMinusOne) {
  EXPECT_THROW(LabelMatrix(1, 2, {1, 0}), StructuralError);
  EXPECT_THROW(LabelMatrix(1, 2, {1, 2}), StructuralError);
  EXPECT_NO_THROW(LabelMatrix(1, 2, {1, -1}));
}

TEST(LabelMatrix, RejectsTooFewRowsOrColumns) {
  EXPECT_THROW(LabelMatrix(0, 2, {}), StructuralError);
  EXPECT_THROW(LabelMatrix(2, 1, {1, -1}), StructuralError);
}

TEST(LabelMatrix, RejectsDuplicateClassifierIds) {
  EXPECT_THROW(LabelMatrix(1, 2, {1, 1}, {"a", "a"}), StructuralError);
}

TEST(LabelMatrix, RejectsBadTruth) {
  EXPECT_THROW(LabelMatrix(2, 2, {1, 1, 1, 1}, {}, {}, std::vector<int>{1}), StructuralError);
  EXPECT_THROW(LabelMatrix(2, 2, {1, 1, 1, 1}, {}, {}, std::vector<int>{1, 0}), StructuralError);
}

TEST(LabelMatrix, NodeIndexingIsOneBased) {
  LabelMatrix m(2, 3, {1, -1, 1, -1, -1, 1});
  EXPECT_EQ(m.node(0, 1), 1);
  EXPECT_EQ(m.node(0, 2), -1);
  EXPECT_EQ(m.node(1, 3), 1);
  EXPECT_EQ(m.column(1), (std::vector<int>{-1, -1}));
  EXPECT_EQ(m.classifier_ids().front(), "f1");
  EXPECT_EQ(m.instance_ids().back(), "2");
}

TEST(ValidateModel, Figure1GraphIsValid) {
  EXPECT_TRUE(validate_model(fixtures::figure1_graph()).empty());
}

TEST(ValidateModel, ExpertExpertEdgeViolatesG3) {
  auto g = fixtures::figure1_graph();
  g.set_edge(1, 2, 0.5);
  const auto vs = validate_model(g);
  ASSERT_TRUE(has_violation(vs, "G3"));
  const auto it = std::find_if(vs.begin(), vs.end(), [](const Violation& v) { return v.property == "G3"; });
  EXPECT_EQ(it->nodes, (std::vector<NodeId>{1, 2}));
}

TEST(ValidateModel, NonExpertOnNodeZeroViolatesG2) {
  auto g = fixtures::figure1_graph();
  g.set_edge(0, 8, 1.0);  // expert_set stays {1..5}
  const auto vs = validate_model(g);
  ASSERT_TRUE(has_violation(vs, "G2"));
  const auto it = std::find_if(vs.begin(), vs.end(), [](const Violation& v) { return v.property == "G2"; });
  EXPECT_NE(std::find(it->nodes.begin(), it->nodes.end(), 8), it->nodes.end());
}

TEST(ValidateModel, DenseObservedNodeViolatesG1) {
  auto g = fixtures::figure1_graph();
  // Node 8 already touches 2, 3, 5; two more neighbors bring it to 5 = d0.
  g.set_edge(8, 17, 0.5);
  g.set_edge(8, 18, 0.5);
  EXPECT_TRUE(has_violation(validate_model(g), "G1"));
}

TEST(ValidateModel, MalformedIndicesAreStructuralErrors) {
  IsingModelSpec g;
  g.p = 3;
  g.edges[{1, 4}] = 1.0;
  EXPECT_THROW(validate_model(g), StructuralError);
  IsingModelSpec h;
  h.p = 3;
  h.edges[{2, 2}] = 1.0;
  EXPECT_THROW(validate_model(h), StructuralError);
  IsingModelSpec z;
  z.p = 3;
  z.edges[{1, 2}] = 0.0;
  EXPECT_THROW(validate_model(z), StructuralError);
}

TEST(ValidateModel, IndependentOfEdgeInsertionOrder) {
  const auto g = fixtures::figure1_graph();
  IsingModelSpec h;
  h.p = g.p;
  h.theta0 = g.theta0;
  std::vector<std::pair<Edge, double>> edges(g.edges.rbegin(), g.edges.rend());
  for (const auto& [e, w] : edges) h.set_edge(e.second, e.first, w);
  h.expert_set = g.expert_set;
  EXPECT_EQ(h.edges, g.edges);
  EXPECT_TRUE(validate_model(h).empty());
}

TEST(DegreeStats, Figure1Counts) {
  const auto st = degree_stats(fixtures::figure1_graph());
  EXPECT_EQ(st.d0, 5);
  EXPECT_EQ(st.degree[1], 2);
  EXPECT_EQ(st.approx_degree[1], 6);
  EXPECT_EQ(st.approx_degree[8], 3);
  EXPECT_EQ(st.approx_degree_max, 6);
}

TEST(DegreeStats, SingleExpertHasApproxDegreeZero) {
  const auto g = IsingModelSpec::from_edges(2, 0.0, {{{0, 1}, 1.0}});
  EXPECT_EQ(degree_stats(g).approx_degree[1], 0);
}

TEST(DegreeStats, NonExpertKeepsItsDegree) {
  const auto g = IsingModelSpec::from_edges(5, 0.0, {{{0, 1}, 1.0}, {{2, 3}, 1.0}, {{2, 4}, 1.0}, {{2, 5}, 1.0}});
  EXPECT_EQ(degree_stats(g).approx_degree[2], 3);
}

TEST(NeighborhoodMap, RejectsSelfAndNodeZeroAndZeroWeights) {
  NeighborhoodMap m(3);
  EXPECT_THROW(m.add(1, 1, 0.5), StructuralError);
  EXPECT_THROW(m.add(1, 0, 0.5), StructuralError);
  EXPECT_THROW(m.add(1, 2, 0.0), StructuralError);
  m.add(1, 2, 0.5);
  EXPECT_EQ(m.of(1), (NodeSet{2}));
  EXPECT_EQ(m.size_of(2), 0u);
}

TEST(ExpertReport, ThetasFollowFromPsiAndPi) {
  ExpertReport r;
  r.psi_hat = {{1, 0.8}, {2, 0.3}};
  r.pi_hat = 0.6;
  r.sync_thetas();
  EXPECT_NEAR(r.theta0s_hat[1], 0.5 * std::log(0.8 / 0.2), 1e-15);
  EXPECT_NEAR(r.theta0s_hat[2], 0.5 * std::log(0.3 / 0.7), 1e-15);
  EXPECT_NEAR(r.theta0_hat, 0.5 * std::log(0.6 / 0.4), 1e-15);
}

TEST(HalfLogit, StableAtExtremes) {
  EXPECT_DOUBLE_EQ(prob_from_half_logit(0.0), 0.5);
  EXPECT_NEAR(prob_from_half_logit(400.0), 1.0, 1e-15);
  EXPECT_NEAR(prob_from_half_logit(-400.0), 0.0, 1e-15);
  for (double x : {-3.0, -0.2, 0.7, 5.0}) EXPECT_NEAR(logit_half(prob_from_half_logit(x)), x, 1e-12);
}

TEST(SignPos, ZeroMapsToPlusOne) {
  EXPECT_EQ(sign_pos(0.0), 1);
  EXPECT_EQ(sign_pos(-1e-300), -1);
}
