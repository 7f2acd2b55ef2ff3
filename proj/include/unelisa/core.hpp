#pragma once

// Domain types shared by every stage of the pipeline: observed label
// matrices, the generative Ising model over (f_0, f_1, ..., f_p), the
// estimated neighborhoods, the expert report and prediction results.
//
// Node 0 is always the hidden truth node. Observed classifiers are 1..p and
// column j of a LabelMatrix holds classifier j+1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unelisa {

using NodeId = int;
using NodeSet = std::set<NodeId>;

// ---------------------------------------------------------------------------
// Errors. Each family maps onto one CLI exit code.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed inputs: indices out of range, dimension mismatches, bad values.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Unparseable or inconsistent files.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for an exact routine (enumeration caps).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Solver or fitting failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// LabelMatrix
// ---------------------------------------------------------------------------

/// n x p matrix of classifier outputs in {-1,+1}, row-major, plus an
/// optional hidden truth column.
class LabelMatrix {
 public:
  LabelMatrix() = default;

  LabelMatrix(std::size_t n, std::size_t p, std::vector<int> values,
              std::vector<std::string> classifier_ids = {},
              std::vector<std::string> instance_ids = {},
              std::optional<std::vector<int>> truth = std::nullopt)
      : n_(n),
        p_(p),
        values_(std::move(values)),
        classifier_ids_(std::move(classifier_ids)),
        instance_ids_(std::move(instance_ids)),
        truth_(std::move(truth)) {
    if (classifier_ids_.empty()) {
      for (std::size_t j = 0; j < p_; ++j) classifier_ids_.push_back("f" + std::to_string(j + 1));
    }
    if (instance_ids_.empty()) {
      for (std::size_t i = 0; i < n_; ++i) instance_ids_.push_back(std::to_string(i + 1));
    }
    validate();
  }

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }

  int operator()(std::size_t i, std::size_t j) const { return values_[i * p_ + j]; }

  /// Label of observed node s (1-based) on row i.
  int node(std::size_t i, NodeId s) const { return values_[i * p_ + static_cast<std::size_t>(s - 1)]; }

  const std::vector<int>& values() const { return values_; }
  const std::vector<std::string>& classifier_ids() const { return classifier_ids_; }
  const std::vector<std::string>& instance_ids() const { return instance_ids_; }
  const std::optional<std::vector<int>>& truth() const { return truth_; }
  bool has_truth() const { return truth_.has_value(); }

  std::vector<int> column(std::size_t j) const {
    std::vector<int> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  /// Sub-matrix holding only the given observed nodes, in the given order.
  /// p >= 2 is not required of the result, so this bypasses validation of
  /// the column count.
  LabelMatrix select_nodes(const std::vector<NodeId>& nodes) const {
    LabelMatrix out;
    out.n_ = n_;
    out.p_ = nodes.size();
    out.values_.resize(n_ * nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (nodes[k] < 1 || static_cast<std::size_t>(nodes[k]) > p_) {
        throw StructuralError("select_nodes: node " + std::to_string(nodes[k]) + " out of range");
      }
      out.classifier_ids_.push_back(classifier_ids_[static_cast<std::size_t>(nodes[k] - 1)]);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < nodes.size(); ++k) out.values_[i * nodes.size() + k] = node(i, nodes[k]);
    }
    out.instance_ids_ = instance_ids_;
    out.truth_ = truth_;
    return out;
  }

  LabelMatrix with_truth(std::vector<int> truth) const {
    LabelMatrix out = *this;
    out.truth_ = std::move(truth);
    out.validate_truth();
    return out;
  }

  friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;

 private:
  void validate() const {
    if (n_ < 1) throw StructuralError("LabelMatrix: need at least one instance");
    if (p_ < 2) throw StructuralError("LabelMatrix: need at least two classifiers");
    if (values_.size() != n_ * p_) throw StructuralError("LabelMatrix: value count does not match n*p");
    for (int v : values_) {
      if (v != 1 && v != -1) throw StructuralError("LabelMatrix: entries must be -1 or +1");
    }
    if (classifier_ids_.size() != p_) throw StructuralError("LabelMatrix: classifier id count does not match p");
    if (std::set<std::string>(classifier_ids_.begin(), classifier_ids_.end()).size() != p_) {
      throw StructuralError("LabelMatrix: classifier ids must be unique");
    }
    if (instance_ids_.size() != n_) throw StructuralError("LabelMatrix: instance id count does not match n");
    validate_truth();
  }

  void validate_truth() const {
    if (!truth_) return;
    if (truth_->size() != n_) throw StructuralError("LabelMatrix: truth length does not match n");
    for (int v : *truth_) {
      if (v != 1 && v != -1) throw StructuralError("LabelMatrix: truth entries must be -1 or +1");
    }
  }

  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<int> values_;
  std::vector<std::string> classifier_ids_;
  std::vector<std::string> instance_ids_;
  std::optional<std::vector<int>> truth_;
};

// ---------------------------------------------------------------------------
// IsingModelSpec
// ---------------------------------------------------------------------------

using Edge = std::pair<NodeId, NodeId>;

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Generative model over (f_0, ..., f_p): external field theta0 on node 0
/// and nonzero pairwise weights. Edges incident to node 0 define experts.
struct IsingModelSpec {
  int p = 0;
  double theta0 = 0.0;
  std::map<Edge, double> edges;
  NodeSet expert_set;

  double weight(NodeId s, NodeId t) const {
    if (s == t) return 0.0;
    auto it = edges.find(make_edge(s, t));
    return it == edges.end() ? 0.0 : it->second;
  }

  /// Adds or overwrites an edge. A zero weight removes it.
  void set_edge(NodeId s, NodeId t, double w) {
    if (w == 0.0) {
      edges.erase(make_edge(s, t));
    } else {
      edges[make_edge(s, t)] = w;
    }
  }

  NodeSet neighbors(NodeId s) const {
    NodeSet out;
    for (const auto& [e, w] : edges) {
      if (e.first == s) out.insert(e.second);
      if (e.second == s) out.insert(e.first);
    }
    return out;
  }

  /// Builds a spec whose expert set is the neighborhood of node 0.
  static IsingModelSpec from_edges(int p, double theta0, const std::map<Edge, double>& edges) {
    IsingModelSpec spec;
    spec.p = p;
    spec.theta0 = theta0;
    for (const auto& [e, w] : edges) spec.set_edge(e.first, e.second, w);
    spec.expert_set = spec.neighbors(0);
    return spec;
  }

  friend bool operator==(const IsingModelSpec&, const IsingModelSpec&) = default;
};

/// Throws StructuralError for indices out of range, self-edges or zero
/// weights. Structural problems are distinct from G1-G3 violations.
inline void check_structure(const IsingModelSpec& spec) {
  if (spec.p < 1) throw StructuralError("IsingModelSpec: p must be positive");
  if (!std::isfinite(spec.theta0)) throw StructuralError("IsingModelSpec: theta0 must be finite");
  for (const auto& [e, w] : spec.edges) {
    const auto [s, t] = e;
    if (s < 0 || t < 0 || s > spec.p || t > spec.p) {
      throw StructuralError("IsingModelSpec: edge (" + std::to_string(s) + "," + std::to_string(t) +
                            ") out of range for p=" + std::to_string(spec.p));
    }
    if (s == t) throw StructuralError("IsingModelSpec: self-edge on node " + std::to_string(s));
    if (s > t) throw StructuralError("IsingModelSpec: edge keys must be ordered");
    if (w == 0.0 || !std::isfinite(w)) {
      throw StructuralError("IsingModelSpec: edge (" + std::to_string(s) + "," + std::to_string(t) +
                            ") must carry a finite nonzero weight");
    }
  }
  for (NodeId s : spec.expert_set) {
    if (s < 1 || s > spec.p) throw StructuralError("IsingModelSpec: expert " + std::to_string(s) + " out of range");
  }
}

struct Violation {
  std::string property;  // "G1", "G2" or "G3"
  std::vector<NodeId> nodes;
  std::string message;
};

/// Degree of s counted over observed nodes only: the edge to node 0 is not
/// included for s >= 1. For node 0 this is its full degree.
inline int observed_degree(const IsingModelSpec& spec, NodeId s) {
  int d = 0;
  for (const auto& [e, w] : spec.edges) {
    if (s != 0 && (e.first == 0 || e.second == 0)) continue;
    if (e.first == s || e.second == s) ++d;
  }
  return d;
}

/// Checks G1 (node 0 dominates the degree sequence by at least 2), G2 (node
/// 0's neighbors are exactly the expert set) and G3 (no expert-expert edge).
/// Returns an empty list iff all hold.
inline std::vector<Violation> validate_model(const IsingModelSpec& spec) {
  check_structure(spec);
  std::vector<Violation> out;

  const int d0 = observed_degree(spec, 0);
  int second = 0;
  std::vector<NodeId> offenders;
  for (NodeId s = 1; s <= spec.p; ++s) second = std::max(second, observed_degree(spec, s));
  for (NodeId s = 1; s <= spec.p; ++s) {
    if (observed_degree(spec, s) > d0 - 2) offenders.push_back(s);
  }
  if (d0 < second + 2) {
    out.push_back({"G1", offenders,
                   "d_0 = " + std::to_string(d0) + " but the largest other degree is " + std::to_string(second)});
  }

  const NodeSet n0 = spec.neighbors(0);
  std::vector<NodeId> g2;
  for (NodeId s : n0) {
    if (!spec.expert_set.count(s)) g2.push_back(s);
  }
  for (NodeId s : spec.expert_set) {
    if (!n0.count(s)) g2.push_back(s);
  }
  if (!g2.empty()) {
    std::sort(g2.begin(), g2.end());
    out.push_back({"G2", g2, "node-0 neighborhood differs from the expert set"});
  }

  for (const auto& [e, w] : spec.edges) {
    if (e.first == 0) continue;
    if (spec.expert_set.count(e.first) && spec.expert_set.count(e.second)) {
      out.push_back({"G3", {e.first, e.second},
                     "edge between experts " + std::to_string(e.first) + " and " + std::to_string(e.second)});
    }
  }
  return out;
}

struct DegreeStats {
  int d0 = 0;
  std::vector<int> degree;          // index s = 1..p, observed degree; index 0 unused
  std::vector<int> approx_degree;   // d~_s
  int approx_degree_max = 0;
};

/// d~_s = d_s + d_0 - 1 for experts and d_s otherwise, with d_s the observed
/// degree; d~_s is the neighborhood size of s once node 0 is marginalized.
inline DegreeStats degree_stats(const IsingModelSpec& spec) {
  check_structure(spec);
  DegreeStats st;
  st.d0 = observed_degree(spec, 0);
  st.degree.assign(static_cast<std::size_t>(spec.p) + 1, 0);
  st.approx_degree.assign(static_cast<std::size_t>(spec.p) + 1, 0);
  for (NodeId s = 1; s <= spec.p; ++s) {
    const int d = observed_degree(spec, s);
    st.degree[s] = d;
    st.approx_degree[s] = spec.expert_set.count(s) ? d + st.d0 - 1 : d;
    st.approx_degree_max = std::max(st.approx_degree_max, st.approx_degree[s]);
  }
  return st;
}

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

/// Per-node estimated neighbor sets with signed weights. Index s = 1..p;
/// entry 0 is unused and always empty.
struct NeighborhoodMap {
  int p = 0;
  std::vector<std::map<NodeId, double>> nbrs;

  explicit NeighborhoodMap(int p_ = 0) : p(p_), nbrs(static_cast<std::size_t>(p_) + 1) {}

  NodeSet of(NodeId s) const {
    NodeSet out;
    for (const auto& [t, w] : nbrs[s]) out.insert(t);
    return out;
  }
  std::size_t size_of(NodeId s) const { return nbrs[s].size(); }

  double weight(NodeId s, NodeId t) const {
    auto it = nbrs[s].find(t);
    return it == nbrs[s].end() ? 0.0 : it->second;
  }

  void add(NodeId s, NodeId t, double w) {
    if (s == t || s < 1 || t < 1 || s > p || t > p) {
      throw StructuralError("NeighborhoodMap: invalid pair (" + std::to_string(s) + "," + std::to_string(t) + ")");
    }
    if (w == 0.0) throw StructuralError("NeighborhoodMap: neighbor weights must be nonzero");
    nbrs[s][t] = w;
  }

  /// Builds a symmetric map from a set of weighted pairs.
  static NeighborhoodMap from_pairs(int p, const std::map<Edge, double>& pairs) {
    NeighborhoodMap m(p);
    for (const auto& [e, w] : pairs) {
      m.add(e.first, e.second, w);
      m.add(e.second, e.first, w);
    }
    return m;
  }

  friend bool operator==(const NeighborhoodMap&, const NeighborhoodMap&) = default;
};

inline double logit_half(double prob) { return 0.5 * std::log(prob / (1.0 - prob)); }

/// Inverse of logit_half: e^{2x} / (1 + e^{2x}).
inline double prob_from_half_logit(double x) {
  if (x >= 0) {
    const double e = std::exp(-2.0 * x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(2.0 * x);
  return e / (1.0 + e);
}

struct ExpertReport {
  NodeSet expert_set_hat;
  NodeSet positive_group;
  NodeSet negative_group;
  std::map<NodeId, double> psi_hat;
  std::map<NodeId, double> theta0s_hat;
  double theta0_hat = 0.0;
  double pi_hat = 0.5;
  bool empty_flag = false;  // no knots or no expert selected

  /// Fills theta0s_hat and theta0_hat from psi_hat and pi_hat.
  void sync_thetas() {
    theta0s_hat.clear();
    for (const auto& [s, psi] : psi_hat) theta0s_hat[s] = logit_half(psi);
    theta0_hat = logit_half(pi_hat);
  }
};

enum class Method { bayes, amv, mv, ds, sml };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::bayes: return "bayes";
    case Method::amv: return "amv";
    case Method::mv: return "mv";
    case Method::ds: return "ds";
    case Method::sml: return "sml";
  }
  return "unknown";
}

inline Method method_from_string(const std::string& s) {
  if (s == "bayes") return Method::bayes;
  if (s == "amv") return Method::amv;
  if (s == "mv") return Method::mv;
  if (s == "ds") return Method::ds;
  if (s == "sml") return Method::sml;
  throw StructuralError("unknown method '" + s + "'");
}

struct PredictionResult {
  std::vector<int> labels;
  std::vector<double> scores;
  Method method = Method::mv;
  std::vector<std::string> flags;

  std::size_t size() const { return labels.size(); }
  bool flagged(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
};

/// The single tie rule used across all predictors: sign(0) = +1.
inline int sign_pos(double x) { return x >= 0.0 ? 1 : -1; }

}  // namespace unelisa
