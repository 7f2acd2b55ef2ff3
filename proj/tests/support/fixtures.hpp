#pragma once

// Graphs and helpers shared by the unit tests and the acceptance runner.

#include <cmath>
#include <map>
#include <vector>

#include "unelisa/core.hpp"
#include "unelisa/harness.hpp"
#include "unelisa/rng.hpp"

namespace unelisa::fixtures {

/// The 18-classifier example graph: experts 1..5 hang off node 0, the rest
/// wire up as drawn. Expert weights are 1, all other edges 0.5.
inline IsingModelSpec figure1_graph(double expert_weight = 1.0, double other_weight = 0.5) {
  std::map<Edge, double> edges;
  for (NodeId s = 1; s <= 5; ++s) edges[make_edge(0, s)] = expert_weight;
  const std::vector<Edge> rest{{1, 6},  {1, 7},   {2, 8},   {3, 8},   {5, 8},   {3, 9},   {6, 7},   {5, 10},
                               {6, 11}, {9, 11},  {10, 12}, {10, 13}, {12, 15}, {11, 14}, {16, 17}, {16, 18}};
  for (const auto& e : rest) edges[e] = other_weight;
  return IsingModelSpec::from_edges(18, 0.0, edges);
}

/// A random spec on p observed nodes satisfying G1-G3: d0 experts with
/// random-sign weights and a sparse non-expert forest under the G1 budget.
/// Weights are drawn from [lo, hi] in magnitude.
inline IsingModelSpec random_valid_spec(int p, int d0, std::uint64_t seed, double lo = 0.3, double hi = 1.5) {
  Rng rng(seed);
  auto mag = [&] { return lo + (hi - lo) * rng.uniform01(); };
  std::map<Edge, double> edges;
  for (NodeId s = 1; s <= d0; ++s) edges[make_edge(0, s)] = rng.sign() * mag();
  const int cap = d0 - 2;
  std::vector<int> degree(static_cast<std::size_t>(p) + 1, 0);
  for (NodeId s = d0 + 1; s <= p; ++s) {
    std::vector<NodeId> open;
    for (NodeId r = 1; r < s; ++r) {
      if (degree[r] < cap) open.push_back(r);
    }
    if (open.empty() || rng.uniform01() < 0.2) continue;
    const NodeId parent = open[rng.below(open.size())];
    edges[make_edge(parent, s)] = rng.sign() * mag();
    ++degree[parent];
    ++degree[s];
  }
  const double theta0 = (rng.uniform01() - 0.5);
  return IsingModelSpec::from_edges(p, theta0, edges);
}

}  // namespace unelisa::fixtures
