#pragma once

// Expert-set reconstruction from estimated neighborhoods.
//
// A node s is a knot when the intersection A_s of its neighbors'
// neighborhoods is exactly {s}. Knots are ranked by neighborhood size
// (descending, ties by ascending node id) and s is kept when
// |N_s| >= rank(s) - 1.

#include <algorithm>
#include <iterator>
#include <vector>

#include "unelisa/core.hpp"

namespace unelisa {

struct KnotCandidate {
  NodeId node = 0;
  NodeSet intersection;  // A_s
  bool knot = false;
  bool empty_neighborhood = false;
};

struct KnotEntry {
  NodeId node = 0;
  std::size_t size = 0;  // |N_s|
  std::size_t rank = 0;  // 1-based
  bool selected = false;
};

struct KnotTable {
  std::vector<KnotEntry> knots;  // in rank order

  NodeSet selected() const {
    NodeSet out;
    for (const auto& k : knots) {
      if (k.selected) out.insert(k.node);
    }
    return out;
  }
  NodeSet nodes() const {
    NodeSet out;
    for (const auto& k : knots) out.insert(k.node);
    return out;
  }
};

/// One entry per observed node. Nodes with an empty neighborhood are never
/// knots and carry empty_neighborhood = true.
inline std::vector<KnotCandidate> knot_set(const NeighborhoodMap& nbhd) {
  std::vector<KnotCandidate> out;
  for (NodeId s = 1; s <= nbhd.p; ++s) {
    KnotCandidate c;
    c.node = s;
    if (nbhd.size_of(s) == 0) {
      c.empty_neighborhood = true;
      out.push_back(std::move(c));
      continue;
    }
    bool first = true;
    for (const auto& [r, w] : nbhd.nbrs[s]) {
      const NodeSet nr = nbhd.of(r);
      if (first) {
        c.intersection = nr;
        first = false;
      } else {
        NodeSet kept;
        std::set_intersection(c.intersection.begin(), c.intersection.end(), nr.begin(), nr.end(),
                              std::inserter(kept, kept.end()));
        c.intersection = std::move(kept);
      }
    }
    c.knot = c.intersection.size() == 1 && *c.intersection.begin() == s;
    out.push_back(std::move(c));
  }
  return out;
}

struct PruneResult {
  ExpertReport report;  // only expert_set_hat and empty_flag are filled
  KnotTable table;
  bool no_knots = false;
};

inline PruneResult reconstruct_n0(const NeighborhoodMap& nbhd) {
  PruneResult out;
  for (const auto& c : knot_set(nbhd)) {
    if (c.knot) out.table.knots.push_back({c.node, nbhd.size_of(c.node), 0, false});
  }
  std::stable_sort(out.table.knots.begin(), out.table.knots.end(), [](const KnotEntry& a, const KnotEntry& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.node < b.node;
  });
  for (std::size_t i = 0; i < out.table.knots.size(); ++i) {
    auto& k = out.table.knots[i];
    k.rank = i + 1;
    k.selected = k.size + 1 >= k.rank;
    if (k.selected) out.report.expert_set_hat.insert(k.node);
  }
  out.no_knots = out.table.knots.empty();
  out.report.empty_flag = out.report.expert_set_hat.empty();
  return out;
}

}  // namespace unelisa
