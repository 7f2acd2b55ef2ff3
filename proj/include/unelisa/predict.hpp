#pragma once

// Prediction over a pruned expert set: one-coin EM for the Bayes classifier
// and the augmented majority vote.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "unelisa/core.hpp"
#include "unelisa/ising_approx.hpp"
#include "unelisa/rng.hpp"

namespace unelisa {

inline constexpr double kProbClamp = 1e-6;

inline double clamp_prob(double x) { return std::clamp(x, kProbClamp, 1.0 - kProbClamp); }

/// P(f_0 = +1 | experts) = sigma(2 (theta_0 + sum_s theta_0s f_s)).
inline double posterior(double theta0, const std::vector<double>& theta0s, const std::vector<int>& row) {
  if (theta0s.size() != row.size()) throw StructuralError("posterior: parameter and row sizes differ");
  double logit = theta0;
  for (std::size_t k = 0; k < row.size(); ++k) logit += theta0s[k] * row[k];
  return prob_from_half_logit(logit);
}

enum class InitKind { soft_majority, random_restarts };

struct InitPolicy {
  InitKind kind = InitKind::soft_majority;
  int restarts = 5;
  std::uint64_t seed = 0;
};

struct EmOptions {
  double tol = 1e-8;  // relative change of the lower bound
  int max_iter = 500;
  InitPolicy init;
};

struct EMState {
  std::vector<double> tau;
  std::vector<double> psi;  // aligned with the expert list
  double pi = 0.5;
  double lower_bound = 0.0;
  int iteration = 0;
};

struct EmFit {
  ExpertReport report;
  EMState state;
  std::vector<NodeId> experts;
  std::vector<double> lower_bound_history;  // expected complete-data log-likelihood
  std::vector<double> elbo_history;         // lower bound plus posterior entropy
  double log_likelihood = 0.0;              // observed-data, final parameters
  bool converged = false;
  bool flipped = false;
};

namespace detail {

struct ExpertColumns {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<int> values;  // row-major n x k
  int at(std::size_t i, std::size_t s) const { return values[i * k + s]; }
};

inline ExpertColumns expert_columns(const LabelMatrix& labels, const std::vector<NodeId>& experts) {
  ExpertColumns c{labels.n(), experts.size(), std::vector<int>(labels.n() * experts.size())};
  for (NodeId s : experts) {
    if (s < 1 || static_cast<std::size_t>(s) > labels.p()) {
      throw StructuralError("expert node " + std::to_string(s) + " is not a column of the label matrix");
    }
  }
  for (std::size_t i = 0; i < c.n; ++i) {
    for (std::size_t s = 0; s < c.k; ++s) c.values[i * c.k + s] = labels.node(i, experts[s]);
  }
  return c;
}

inline void m_step(const ExpertColumns& x, const std::vector<double>& tau, std::vector<double>& psi, double& pi) {
  const double n = static_cast<double>(x.n);
  double sum_tau = 0.0;
  for (double t : tau) sum_tau += t;
  pi = clamp_prob(sum_tau / n);
  psi.assign(x.k, 0.0);
  for (std::size_t s = 0; s < x.k; ++s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.n; ++i) acc += (tau[i] - 0.5) * x.at(i, s);
    psi[s] = clamp_prob(0.5 + acc / n);
  }
}

inline void e_step(const ExpertColumns& x, const std::vector<double>& psi, double pi, std::vector<double>& tau) {
  std::vector<double> theta(x.k);
  for (std::size_t s = 0; s < x.k; ++s) theta[s] = logit_half(psi[s]);
  const double theta0 = logit_half(pi);
  tau.resize(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    double logit = theta0;
    for (std::size_t s = 0; s < x.k; ++s) logit += theta[s] * x.at(i, s);
    tau[i] = prob_from_half_logit(logit);
  }
}

/// Expected complete-data log-likelihood with Z replaced by tau.
inline double lower_bound(const ExpertColumns& x, const std::vector<double>& tau, const std::vector<double>& psi,
                          double pi) {
  double acc = 0.0;
  std::vector<double> lp(x.k), lq(x.k);
  for (std::size_t s = 0; s < x.k; ++s) {
    lp[s] = std::log(psi[s]);
    lq[s] = std::log1p(-psi[s]);
  }
  const double lpi = std::log(pi);
  const double lpi_c = std::log1p(-pi);
  for (std::size_t i = 0; i < x.n; ++i) {
    double pos = 0.0;  // log p(row | f_0 = +1)
    double neg = 0.0;
    for (std::size_t s = 0; s < x.k; ++s) {
      if (x.at(i, s) == 1) {
        pos += lp[s];
        neg += lq[s];
      } else {
        pos += lq[s];
        neg += lp[s];
      }
    }
    acc += tau[i] * (pos + lpi) + (1.0 - tau[i]) * (neg + lpi_c);
  }
  return acc;
}

inline double entropy(const std::vector<double>& tau) {
  double h = 0.0;
  for (double t : tau) {
    if (t > 0.0) h -= t * std::log(t);
    if (t < 1.0) h -= (1.0 - t) * std::log1p(-t);
  }
  return h;
}

inline double observed_log_likelihood(const ExpertColumns& x, const std::vector<double>& psi, double pi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.n; ++i) {
    double pos = std::log(pi);
    double neg = std::log1p(-pi);
    for (std::size_t s = 0; s < x.k; ++s) {
      const bool agree = x.at(i, s) == 1;
      pos += agree ? std::log(psi[s]) : std::log1p(-psi[s]);
      neg += agree ? std::log1p(-psi[s]) : std::log(psi[s]);
    }
    const double m = std::max(pos, neg);
    acc += m + std::log(std::exp(pos - m) + std::exp(neg - m));
  }
  return acc;
}

inline EmFit run_em(const ExpertColumns& x, std::vector<double> tau, const EmOptions& opts) {
  EmFit fit;
  EMState& st = fit.state;
  m_step(x, tau, st.psi, st.pi);
  st.tau = std::move(tau);
  st.lower_bound = lower_bound(x, st.tau, st.psi, st.pi);
  fit.lower_bound_history.push_back(st.lower_bound);
  fit.elbo_history.push_back(st.lower_bound + entropy(st.tau));
  for (int it = 1; it <= opts.max_iter; ++it) {
    e_step(x, st.psi, st.pi, st.tau);
    m_step(x, st.tau, st.psi, st.pi);
    const double prev = st.lower_bound;
    st.lower_bound = lower_bound(x, st.tau, st.psi, st.pi);
    st.iteration = it;
    fit.lower_bound_history.push_back(st.lower_bound);
    fit.elbo_history.push_back(st.lower_bound + entropy(st.tau));
    if (std::abs(st.lower_bound - prev) < opts.tol * std::max(std::abs(prev), 1e-300)) {
      fit.converged = true;
      break;
    }
  }
  fit.log_likelihood = observed_log_likelihood(x, st.psi, st.pi);
  return fit;
}

}  // namespace detail

/// Maps an agreement probability psi to theta_0s and back.
inline double theta_from_psi(double psi) { return logit_half(psi); }
inline double psi_from_theta(double theta) { return prob_from_half_logit(theta); }

/// One-coin EM over the expert columns. The label-flip symmetry of the
/// likelihood is resolved by requiring most theta_0s to be positive; on an
/// even split the sign of sum theta_0s decides.
inline EmFit em_fit(const LabelMatrix& labels, const std::vector<NodeId>& experts, const EmOptions& opts = {}) {
  if (experts.empty()) throw StructuralError("em_fit: need at least one expert");
  const auto x = detail::expert_columns(labels, experts);

  std::vector<double> soft(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    int pos = 0;
    for (std::size_t s = 0; s < x.k; ++s) pos += x.at(i, s) == 1;
    soft[i] = static_cast<double>(pos) / static_cast<double>(x.k);
  }

  EmFit fit;
  if (opts.init.kind == InitKind::soft_majority) {
    fit = detail::run_em(x, soft, opts);
  } else {
    Rng rng(opts.init.seed);
    bool have = false;
    for (int r = 0; r < std::max(1, opts.init.restarts); ++r) {
      std::vector<double> tau(x.n);
      for (double& t : tau) t = rng.uniform01();
      auto cand = detail::run_em(x, std::move(tau), opts);
      if (!have || cand.log_likelihood > fit.log_likelihood) {
        fit = std::move(cand);
        have = true;
      }
    }
  }
  fit.experts = experts;

  int positive = 0;
  double total = 0.0;
  for (double psi : fit.state.psi) {
    const double th = theta_from_psi(psi);
    positive += th > 0 ? 1 : (th < 0 ? -1 : 0);
    total += th;
  }
  if (positive < 0 || (positive == 0 && total < 0)) {
    fit.flipped = true;
    for (double& psi : fit.state.psi) psi = 1.0 - psi;
    fit.state.pi = 1.0 - fit.state.pi;
    for (double& t : fit.state.tau) t = 1.0 - t;
  }

  ExpertReport& rep = fit.report;
  rep.expert_set_hat = NodeSet(experts.begin(), experts.end());
  for (std::size_t s = 0; s < experts.size(); ++s) rep.psi_hat[experts[s]] = fit.state.psi[s];
  rep.pi_hat = fit.state.pi;
  rep.sync_thetas();
  for (const auto& [s, th] : rep.theta0s_hat) (th >= 0 ? rep.positive_group : rep.negative_group).insert(s);
  return fit;
}

/// label_i = sign(theta_0 + sum_s theta_0s f_s) with sign(0) = +1; the score
/// is the posterior of +1.
inline PredictionResult bayes_classify(const ExpertReport& report, const LabelMatrix& labels) {
  std::vector<NodeId> experts;
  std::vector<double> theta;
  for (const auto& [s, th] : report.theta0s_hat) {
    if (s < 1 || static_cast<std::size_t>(s) > labels.p()) {
      throw StructuralError("bayes_classify: expert " + std::to_string(s) + " is not a column of the label matrix");
    }
    experts.push_back(s);
    theta.push_back(th);
  }
  PredictionResult out;
  out.method = Method::bayes;
  out.labels.resize(labels.n());
  out.scores.resize(labels.n());
  for (std::size_t i = 0; i < labels.n(); ++i) {
    double logit = report.theta0_hat;
    for (std::size_t k = 0; k < experts.size(); ++k) logit += theta[k] * labels.node(i, experts[k]);
    out.labels[i] = sign_pos(logit);
    out.scores[i] = prob_from_half_logit(logit);
  }
  if (experts.empty()) out.flags.push_back("no_experts");
  return out;
}

/// Row-wise majority vote over the given columns with sign(0) = +1; the
/// score is the fraction of positive votes.
inline PredictionResult vote(const LabelMatrix& labels, const std::vector<NodeId>& nodes,
                             const std::vector<int>& column_sign, Method tag) {
  PredictionResult out;
  out.method = tag;
  out.labels.resize(labels.n());
  out.scores.resize(labels.n());
  for (std::size_t i = 0; i < labels.n(); ++i) {
    int sum = 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += column_sign[k] * labels.node(i, nodes[k]);
    out.labels[i] = sign_pos(sum);
    out.scores[i] = 0.5 + 0.5 * static_cast<double>(sum) / static_cast<double>(nodes.size());
  }
  return out;
}

/// Negates the smaller sign group of the experts and takes a majority vote.
/// `signs` is the symmetric expert-pair sign matrix aligned with `experts`;
/// `nbhd_sizes` (|N_s| per expert) breaks a group-size tie: the group not
/// holding the expert with the largest |N_s| (lowest id among equals) is
/// declared negative and the result is flagged "group_size_tie".
inline PredictionResult augmented_majority_vote(const std::vector<NodeId>& experts,
                                                const std::vector<std::vector<int>>& signs, const LabelMatrix& labels,
                                                const std::map<NodeId, std::size_t>& nbhd_sizes = {}) {
  if (experts.empty()) throw StructuralError("augmented_majority_vote: need at least one expert");
  const SignPartition part = sign_partition(experts, signs);
  bool tie = false;
  const NodeSet* negative = nullptr;
  if (part.group_a.size() > part.group_b.size()) {
    negative = &part.group_b;
  } else if (part.group_a.size() < part.group_b.size()) {
    negative = &part.group_a;
  } else {
    tie = true;
    NodeId anchor = experts.front();
    std::size_t best = 0;
    bool have = false;
    for (NodeId s : NodeSet(experts.begin(), experts.end())) {
      auto it = nbhd_sizes.find(s);
      const std::size_t sz = it == nbhd_sizes.end() ? 0 : it->second;
      if (!have || sz > best) {
        best = sz;
        anchor = s;
        have = true;
      }
    }
    negative = part.group_a.count(anchor) ? &part.group_b : &part.group_a;
  }
  std::vector<int> column_sign(experts.size(), 1);
  for (std::size_t k = 0; k < experts.size(); ++k) {
    if (negative->count(experts[k])) column_sign[k] = -1;
  }
  auto out = vote(labels, experts, column_sign, Method::amv);
  if (tie) out.flags.push_back("group_size_tie");
  return out;
}

/// Expert-pair sign matrix from the signs of the symmetrized estimates.
inline std::vector<std::vector<int>> expert_sign_matrix(const NeighborhoodMap& nbhd, const std::vector<NodeId>& experts) {
  std::vector<std::vector<int>> m(experts.size(), std::vector<int>(experts.size(), 0));
  for (std::size_t a = 0; a < experts.size(); ++a) {
    for (std::size_t b = a + 1; b < experts.size(); ++b) {
      double w = nbhd.weight(experts[a], experts[b]);
      if (w == 0.0) w = nbhd.weight(experts[b], experts[a]);
      const int sg = w > 0 ? 1 : (w < 0 ? -1 : 0);
      m[a][b] = m[b][a] = sg;
    }
  }
  return m;
}

inline PredictionResult augmented_majority_vote(const std::vector<NodeId>& experts, const NeighborhoodMap& nbhd,
                                                const LabelMatrix& labels) {
  std::map<NodeId, std::size_t> sizes;
  for (NodeId s : experts) sizes[s] = nbhd.size_of(s);
  return augmented_majority_vote(experts, expert_sign_matrix(nbhd, experts), labels, sizes);
}

}  // namespace unelisa
