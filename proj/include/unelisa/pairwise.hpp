#pragma once

// A general pairwise binary Markov random field over a contiguous node range
// [first_node, first_node + num_nodes). Both the generative model (nodes
// 0..p, field on node 0) and its node-0-marginalized approximation (nodes
// 1..p, no field) are expressed in this form for sampling and enumeration.

#include <cstddef>
#include <utility>
#include <vector>

#include "unelisa/core.hpp"

namespace unelisa {

struct PairwiseIsing {
  int num_nodes = 0;
  NodeId first_node = 0;
  std::vector<double> field;                                  // per local index
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // local index -> (local neighbor, weight)

  PairwiseIsing(int num_nodes_, NodeId first_node_)
      : num_nodes(num_nodes_),
        first_node(first_node_),
        field(static_cast<std::size_t>(num_nodes_), 0.0),
        adjacency(static_cast<std::size_t>(num_nodes_)) {}

  int local(NodeId s) const { return s - first_node; }
  NodeId node(int local_index) const { return local_index + first_node; }
  bool contains(NodeId s) const { return s >= first_node && s < first_node + num_nodes; }

  void add_coupling(NodeId s, NodeId t, double w) {
    if (w == 0.0) return;
    adjacency[static_cast<std::size_t>(local(s))].push_back({local(t), w});
    adjacency[static_cast<std::size_t>(local(t))].push_back({local(s), w});
  }

  /// Sum of couplings times neighbor spins plus the node's field.
  double local_field(int i, const std::vector<int>& y) const {
    double h = field[static_cast<std::size_t>(i)];
    for (const auto& [j, w] : adjacency[static_cast<std::size_t>(i)]) h += w * y[static_cast<std::size_t>(j)];
    return h;
  }

  static PairwiseIsing from_spec(const IsingModelSpec& spec) {
    check_structure(spec);
    PairwiseIsing m(spec.p + 1, 0);
    m.field[0] = spec.theta0;
    for (const auto& [e, w] : spec.edges) m.add_coupling(e.first, e.second, w);
    return m;
  }
};

}  // namespace unelisa
