#pragma once

// Exact probability oracle by brute-force enumeration of {-1,+1}^k.
//
// State index convention: bit j of the index is node (first_node + j), a set
// bit meaning +1. All reductions run in index order with Neumaier
// compensation, so results do not depend on scheduling.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "unelisa/core.hpp"
#include "unelisa/pairwise.hpp"

namespace unelisa {

inline constexpr int kDefaultEnumerationCap = 24;

class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct ExactDistribution {
  int num_nodes = 0;
  NodeId first_node = 0;
  std::vector<double> pmf;
  /// A(theta) for distributions enumerated from a model; empty for derived
  /// distributions such as marginals.
  std::optional<double> log_partition;

  std::size_t num_states() const { return pmf.size(); }

  int spin(std::uint64_t state, NodeId s) const { return (state >> (s - first_node)) & 1U ? 1 : -1; }

  bool contains(NodeId s) const { return s >= first_node && s < first_node + num_nodes; }

  std::uint64_t index_of(const std::vector<int>& spins) const {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < spins.size(); ++j) {
      if (spins[j] == 1) idx |= std::uint64_t{1} << j;
    }
    return idx;
  }
};

inline ExactDistribution enumerate(const PairwiseIsing& model, int cap = kDefaultEnumerationCap) {
  if (model.num_nodes > cap) {
    throw SizeError("enumerate: " + std::to_string(model.num_nodes) + " nodes exceeds the cap of " +
                    std::to_string(cap));
  }
  if (model.num_nodes > 62) throw SizeError("enumerate: node count not representable");

  struct Coupling {
    int a, b;
    double w;
  };
  std::vector<Coupling> couplings;
  for (int i = 0; i < model.num_nodes; ++i) {
    for (const auto& [j, w] : model.adjacency[static_cast<std::size_t>(i)]) {
      if (i < j) couplings.push_back({i, j, w});
    }
  }

  const std::uint64_t states = std::uint64_t{1} << model.num_nodes;
  std::vector<double> energy(states);
  double emax = -std::numeric_limits<double>::infinity();
  for (std::uint64_t x = 0; x < states; ++x) {
    double e = 0.0;
    for (int i = 0; i < model.num_nodes; ++i) {
      const double f = model.field[static_cast<std::size_t>(i)];
      if (f != 0.0) e += (x >> i) & 1U ? f : -f;
    }
    for (const auto& c : couplings) {
      const bool same = (((x >> c.a) ^ (x >> c.b)) & 1U) == 0;
      e += same ? c.w : -c.w;
    }
    energy[x] = e;
    emax = std::max(emax, e);
  }

  CompensatedSum z;
  for (std::uint64_t x = 0; x < states; ++x) z.add(std::exp(energy[x] - emax));
  const double log_z = emax + std::log(z.value());

  ExactDistribution dist;
  dist.num_nodes = model.num_nodes;
  dist.first_node = model.first_node;
  dist.log_partition = log_z;
  dist.pmf.resize(states);
  for (std::uint64_t x = 0; x < states; ++x) dist.pmf[x] = std::exp(energy[x] - log_z);
  return dist;
}

/// Joint pmf of (f_0, ..., f_p) for the generative model.
inline ExactDistribution enumerate(const IsingModelSpec& spec, int cap = kDefaultEnumerationCap) {
  return enumerate(PairwiseIsing::from_spec(spec), cap);
}

/// Visits every state with its spins (indexed by local node) and probability.
inline void for_each_state(const ExactDistribution& dist,
                           const std::function<void(const std::vector<int>&, double)>& fn) {
  std::vector<int> y(static_cast<std::size_t>(dist.num_nodes));
  for (std::uint64_t x = 0; x < dist.num_states(); ++x) {
    for (int j = 0; j < dist.num_nodes; ++j) y[static_cast<std::size_t>(j)] = (x >> j) & 1U ? 1 : -1;
    fn(y, dist.pmf[x]);
  }
}

inline double pair_moment(const ExactDistribution& dist, NodeId r, NodeId t) {
  if (r == t) throw StructuralError("pair_moment: nodes must differ");
  if (!dist.contains(r) || !dist.contains(t)) throw StructuralError("pair_moment: node out of range");
  const int a = r - dist.first_node;
  const int b = t - dist.first_node;
  CompensatedSum acc;
  for (std::uint64_t x = 0; x < dist.num_states(); ++x) {
    const bool same = (((x >> a) ^ (x >> b)) & 1U) == 0;
    acc.add(same ? dist.pmf[x] : -dist.pmf[x]);
  }
  return acc.value();
}

inline double mean_spin(const ExactDistribution& dist, NodeId r) {
  if (!dist.contains(r)) throw StructuralError("mean_spin: node out of range");
  CompensatedSum acc;
  for (std::uint64_t x = 0; x < dist.num_states(); ++x) acc.add(dist.spin(x, r) * dist.pmf[x]);
  return acc.value();
}

/// Distribution of (f_1, ..., f_p) obtained by summing over f_0.
inline ExactDistribution marginalize_out_node0(const ExactDistribution& dist) {
  if (dist.first_node != 0 || dist.num_nodes < 2) {
    throw StructuralError("marginalize_out_node0: distribution must include node 0 and one other node");
  }
  ExactDistribution out;
  out.num_nodes = dist.num_nodes - 1;
  out.first_node = 1;
  out.pmf.assign(dist.num_states() / 2, 0.0);
  for (std::uint64_t x = 0; x < dist.num_states(); ++x) out.pmf[x >> 1] += dist.pmf[x];
  return out;
}

/// Half log-odds of f_s = +1 given all other observed classifiers, computed
/// from the node-0-marginalized distribution. `others` holds one spin per
/// observed node 1..p; the entry for s is ignored.
inline double conditional_logit(const ExactDistribution& dist, NodeId s, const std::vector<int>& others) {
  if (dist.first_node == 0) return conditional_logit(marginalize_out_node0(dist), s, others);
  if (dist.first_node != 1) throw StructuralError("conditional_logit: expected a distribution over nodes 1..p");
  if (!dist.contains(s)) throw StructuralError("conditional_logit: node out of range");
  if (others.size() != static_cast<std::size_t>(dist.num_nodes)) {
    throw StructuralError("conditional_logit: assignment must cover all observed nodes");
  }
  std::vector<int> y = others;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (static_cast<NodeId>(j) + 1 == s) continue;
    if (y[j] != 1 && y[j] != -1) throw StructuralError("conditional_logit: incomplete assignment");
  }
  y[static_cast<std::size_t>(s - 1)] = 1;
  const double plus = dist.pmf[dist.index_of(y)];
  y[static_cast<std::size_t>(s - 1)] = -1;
  const double minus = dist.pmf[dist.index_of(y)];
  return 0.5 * (std::log(plus) - std::log(minus));
}

inline double kl_divergence(const ExactDistribution& p, const ExactDistribution& q) {
  if (p.num_nodes != q.num_nodes || p.first_node != q.first_node || p.pmf.size() != q.pmf.size()) {
    throw StructuralError("kl_divergence: distributions have different supports");
  }
  CompensatedSum acc;
  for (std::size_t x = 0; x < p.pmf.size(); ++x) {
    if (p.pmf[x] == 0.0) continue;
    if (q.pmf[x] <= 0.0) return std::numeric_limits<double>::infinity();
    acc.add(p.pmf[x] * (std::log(p.pmf[x]) - std::log(q.pmf[x])));
  }
  return std::max(0.0, acc.value());
}

}  // namespace unelisa
