#pragma once

// Closed-form pairwise approximation of the distribution of (f_1..f_p) once
// the hidden node is summed out. Non-expert couplings carry over unchanged;
// every pair of experts becomes coupled with weight theta_tilde_pair.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "unelisa/core.hpp"
#include "unelisa/pairwise.hpp"
#include "unelisa/rng.hpp"

namespace unelisa {

namespace detail {

inline double log_sum_exp(std::initializer_list<double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace detail

/// Coupling induced between experts s and t by marginalizing f_0:
///   1/2 log[(e^a1 + e^-a1 + e^a2 + e^-a2) / (e^a3 + e^-a3 + e^a4 + e^-a4)]
/// with a1,a2 = theta_0s + theta_0t +/- theta_0 and a3,a4 = theta_0s -
/// theta_0t +/- theta_0. The ratio simplifies to cosh(x+y)/cosh(x-y), so the
/// value equals atanh(tanh x * tanh y) and theta_0 cancels; the atanh form is
/// used near zero where the log-sum-exp difference loses relative precision.
inline double theta_tilde_pair(double theta_0s, double theta_0t, double theta_0) {
  const double a1 = theta_0s + theta_0t + theta_0;
  const double a2 = theta_0s + theta_0t - theta_0;
  const double a3 = theta_0s - theta_0t + theta_0;
  const double a4 = theta_0s - theta_0t - theta_0;
  const double v = 0.5 * (detail::log_sum_exp({a1, -a1, a2, -a2}) - detail::log_sum_exp({a3, -a3, a4, -a4}));
  if (std::abs(v) < 0.25) return std::atanh(std::tanh(theta_0s) * std::tanh(theta_0t));
  return v;
}

struct ApproxModel {
  int p = 0;
  std::map<Edge, double> theta_tilde;  // nonzero pairs over 1..p only

  double weight(NodeId s, NodeId t) const {
    auto it = theta_tilde.find(make_edge(s, t));
    return it == theta_tilde.end() ? 0.0 : it->second;
  }

  /// Induced neighborhoods: the nonzero pattern of theta_tilde.
  NeighborhoodMap neighborhoods() const { return NeighborhoodMap::from_pairs(p, theta_tilde); }

  PairwiseIsing to_pairwise() const {
    PairwiseIsing m(p, 1);
    for (const auto& [e, w] : theta_tilde) m.add_coupling(e.first, e.second, w);
    return m;
  }

  /// As a node-0-free generative spec (for file output and sampling).
  IsingModelSpec to_spec() const {
    IsingModelSpec spec;
    spec.p = p;
    for (const auto& [e, w] : theta_tilde) spec.set_edge(e.first, e.second, w);
    return spec;
  }
};

/// Requires a structurally valid spec satisfying G2 and G3; G1 is not needed
/// for the approximation itself.
inline ApproxModel approximate(const IsingModelSpec& spec) {
  check_structure(spec);
  for (const auto& v : validate_model(spec)) {
    if (v.property != "G1") throw StructuralError("approximate: " + v.property + " violated: " + v.message);
  }
  ApproxModel out;
  out.p = spec.p;
  for (const auto& [e, w] : spec.edges) {
    if (e.first == 0) continue;
    out.theta_tilde[e] = w;
  }
  const std::vector<NodeId> experts(spec.expert_set.begin(), spec.expert_set.end());
  for (std::size_t a = 0; a < experts.size(); ++a) {
    for (std::size_t b = a + 1; b < experts.size(); ++b) {
      const NodeId s = experts[a];
      const NodeId t = experts[b];
      const double w = theta_tilde_pair(spec.weight(0, s), spec.weight(0, t), spec.theta0);
      if (w != 0.0) out.theta_tilde[make_edge(s, t)] = w;
    }
  }
  return out;
}

struct SignPartition {
  NodeSet group_a;
  NodeSet group_b;
};

namespace detail {

// Leading (largest algebraic) eigenvector of a symmetric matrix by power
// iteration on the shifted matrix M + cI, c = max absolute row sum.
inline std::pair<std::vector<double>, double> shifted_power_iteration(const std::vector<std::vector<double>>& m,
                                                                      std::vector<double> v, int max_iter,
                                                                      double tol) {
  const std::size_t k = m.size();
  double shift = 0.0;
  for (const auto& row : m) {
    double r = 0.0;
    for (double x : row) r += std::abs(x);
    shift = std::max(shift, r);
  }
  auto normalize = [](std::vector<double>& x) {
    double nrm = 0.0;
    for (double e : x) nrm += e * e;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return false;
    for (double& e : x) e /= nrm;
    return true;
  };
  if (!normalize(v)) return {v, -std::numeric_limits<double>::infinity()};
  std::vector<double> w(k);
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      double acc = shift * v[i];
      for (std::size_t j = 0; j < k; ++j) acc += m[i][j] * v[j];
      w[i] = acc;
    }
    if (!normalize(w)) break;
    double diff = 0.0;
    for (std::size_t i = 0; i < k; ++i) diff = std::max(diff, std::abs(w[i] - v[i]));
    v.swap(w);
    if (diff < tol) break;
  }
  double rq = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += m[i][j] * v[j];
    rq += v[i] * acc;
  }
  return {v, rq};
}

}  // namespace detail

/// Splits `nodes` into two groups from a symmetric sign matrix (entries in
/// {-1,0,+1}, zero diagonal) using the sign pattern of its leading
/// eigenvector. Power iteration starts from all-ones; the alternating +/-1
/// start is also tried in case all-ones is orthogonal to the leading
/// eigenvector, and a fixed pseudo-random start covers the case where both
/// are (e.g. z = (1,-1,-1,1)). The start with the largest Rayleigh quotient
/// wins. The
/// eigenvector is oriented so the first node is nonnegative; entries with
/// magnitude below 1e-12 go to group_a.
inline SignPartition sign_partition(const std::vector<NodeId>& nodes, const std::vector<std::vector<int>>& signs) {
  const std::size_t k = nodes.size();
  if (k == 0) throw StructuralError("sign_partition: empty node subset");
  if (signs.size() != k) throw StructuralError("sign_partition: matrix size does not match node count");
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    if (signs[i].size() != k) throw StructuralError("sign_partition: matrix must be square");
    for (std::size_t j = 0; j < k; ++j) {
      const int v = signs[i][j];
      if (v < -1 || v > 1) throw StructuralError("sign_partition: entries must be in {-1,0,1}");
      if (i == j && v != 0) throw StructuralError("sign_partition: diagonal must be zero");
      if (signs[j][i] != v) throw StructuralError("sign_partition: matrix must be symmetric");
      m[i][j] = v;
    }
  }

  std::vector<double> ones(k, 1.0);
  std::vector<double> alternating(k);
  for (std::size_t i = 0; i < k; ++i) alternating[i] = i % 2 == 0 ? 1.0 : -1.0;
  std::vector<double> generic(k);
  Rng rng(0x9E3779B97F4A7C15ULL);
  for (double& x : generic) x = 0.5 + rng.uniform01();
  auto [v, r] = detail::shifted_power_iteration(m, ones, 1000, 1e-10);
  for (const auto& start : {alternating, generic}) {
    auto [w, q] = detail::shifted_power_iteration(m, start, 1000, 1e-10);
    if (q > r + 1e-9) {
      v = std::move(w);
      r = q;
    }
  }

  std::size_t first_nonzero = 0;
  while (first_nonzero < k && std::abs(v[first_nonzero]) < 1e-12) ++first_nonzero;
  if (first_nonzero < k && v[first_nonzero] < 0) {
    for (double& x : v) x = -x;
  }
  SignPartition out;
  for (std::size_t i = 0; i < k; ++i) {
    if (std::abs(v[i]) < 1e-12 || v[i] > 0) {
      out.group_a.insert(nodes[i]);
    } else {
      out.group_b.insert(nodes[i]);
    }
  }
  return out;
}

}  // namespace unelisa
