#pragma once

// Comparator predictors over the full ensemble: majority vote, two-coin
// Dawid-Skene EM and the rank-one spectral meta-learner.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "unelisa/core.hpp"
#include "unelisa/ising_approx.hpp"
#include "unelisa/predict.hpp"

namespace unelisa {

inline std::vector<NodeId> all_nodes(const LabelMatrix& labels) {
  std::vector<NodeId> nodes(labels.p());
  std::iota(nodes.begin(), nodes.end(), 1);
  return nodes;
}

inline PredictionResult majority_vote(const LabelMatrix& labels) {
  if (labels.p() < 1) throw StructuralError("majority_vote: need at least one classifier");
  return vote(labels, all_nodes(labels), std::vector<int>(labels.p(), 1), Method::mv);
}

struct DSParams {
  std::vector<double> sensitivity;  // eta_s = P(f_s = +1 | f_0 = +1)
  std::vector<double> specificity;  // xi_s  = P(f_s = -1 | f_0 = -1)
  double pi = 0.5;
};

struct DSFit {
  PredictionResult prediction;
  DSParams params;
  std::vector<double> log_likelihood_history;
  int iterations = 0;
  bool converged = false;
  bool flipped = false;
};

namespace detail {

inline void ds_m_step(const LabelMatrix& x, const std::vector<double>& tau, DSParams& prm) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  double sum_tau = 0.0;
  for (double t : tau) sum_tau += t;
  const double sum_neg = static_cast<double>(n) - sum_tau;
  prm.pi = clamp_prob(sum_tau / static_cast<double>(n));
  prm.sensitivity.assign(p, 0.5);
  prm.specificity.assign(p, 0.5);
  for (std::size_t s = 0; s < p; ++s) {
    double pos_hits = 0.0;
    double neg_hits = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x(i, s) == 1) {
        pos_hits += tau[i];
      } else {
        neg_hits += 1.0 - tau[i];
      }
    }
    prm.sensitivity[s] = clamp_prob(sum_tau > 0.0 ? pos_hits / sum_tau : 0.5);
    prm.specificity[s] = clamp_prob(sum_neg > 0.0 ? neg_hits / sum_neg : 0.5);
  }
}

// Fills tau and returns the observed-data log-likelihood.
inline double ds_e_step(const LabelMatrix& x, const DSParams& prm, std::vector<double>& tau) {
  const std::size_t p = x.p();
  std::vector<double> lp1(p), lm1(p), ln1(p), lnm1(p);
  for (std::size_t s = 0; s < p; ++s) {
    lp1[s] = std::log(prm.sensitivity[s]);
    lm1[s] = std::log1p(-prm.sensitivity[s]);
    lnm1[s] = std::log(prm.specificity[s]);
    ln1[s] = std::log1p(-prm.specificity[s]);
  }
  double ll = 0.0;
  tau.resize(x.n());
  for (std::size_t i = 0; i < x.n(); ++i) {
    double a = std::log(prm.pi);
    double b = std::log1p(-prm.pi);
    for (std::size_t s = 0; s < p; ++s) {
      if (x(i, s) == 1) {
        a += lp1[s];
        b += ln1[s];
      } else {
        a += lm1[s];
        b += lnm1[s];
      }
    }
    const double m = std::max(a, b);
    const double lse = m + std::log(std::exp(a - m) + std::exp(b - m));
    ll += lse;
    tau[i] = std::exp(a - lse);
  }
  return ll;
}

}  // namespace detail

/// Two-coin Dawid-Skene EM initialized from the soft majority vote. The
/// labelling with most classifiers better than chance (eta + xi > 1) is kept.
inline DSFit dawid_skene(const LabelMatrix& labels, double tol = 1e-8, int max_iter = 500) {
  if (labels.p() < 1) throw StructuralError("dawid_skene: need at least one classifier");
  const std::size_t n = labels.n();
  std::vector<double> tau(n);
  for (std::size_t i = 0; i < n; ++i) {
    int pos = 0;
    for (std::size_t s = 0; s < labels.p(); ++s) pos += labels(i, s) == 1;
    tau[i] = static_cast<double>(pos) / static_cast<double>(labels.p());
  }

  DSFit fit;
  detail::ds_m_step(labels, tau, fit.params);
  double ll = detail::ds_e_step(labels, fit.params, tau);
  fit.log_likelihood_history.push_back(ll);
  for (int it = 1; it <= max_iter; ++it) {
    detail::ds_m_step(labels, tau, fit.params);
    const double prev = ll;
    ll = detail::ds_e_step(labels, fit.params, tau);
    fit.log_likelihood_history.push_back(ll);
    fit.iterations = it;
    if (std::abs(ll - prev) < tol * std::max(std::abs(prev), 1e-300)) {
      fit.converged = true;
      break;
    }
  }

  int vote_sum = 0;
  double total = 0.0;
  for (std::size_t s = 0; s < labels.p(); ++s) {
    const double j = fit.params.sensitivity[s] + fit.params.specificity[s] - 1.0;
    vote_sum += j > 0 ? 1 : (j < 0 ? -1 : 0);
    total += j;
  }
  if (vote_sum < 0 || (vote_sum == 0 && total < 0)) {
    fit.flipped = true;
    for (std::size_t s = 0; s < labels.p(); ++s) {
      const double eta = fit.params.sensitivity[s];
      fit.params.sensitivity[s] = 1.0 - fit.params.specificity[s];
      fit.params.specificity[s] = 1.0 - eta;
    }
    fit.params.pi = 1.0 - fit.params.pi;
    for (double& t : tau) t = 1.0 - t;
  }

  fit.prediction.method = Method::ds;
  fit.prediction.scores = tau;
  fit.prediction.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) fit.prediction.labels[i] = sign_pos(tau[i] - 0.5);
  if (!fit.converged) fit.prediction.flags.push_back("not_converged");
  return fit;
}

struct SMLFit {
  PredictionResult prediction;
  std::vector<double> weights;  // unit-norm leading eigenvector
  bool degenerate = false;
};

/// Spectral meta-learner: the leading eigenvector of the column covariance,
/// after 20 passes that replace the diagonal by that of the current rank-one
/// fit, weights a linear vote.
inline SMLFit sml(const LabelMatrix& labels) {
  const std::size_t p = labels.p();
  const std::size_t n = labels.n();
  if (p < 3) throw StructuralError("sml: need at least three classifiers");

  std::vector<double> mean(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < p; ++s) mean[s] += labels(i, s);
  }
  for (double& m : mean) m /= static_cast<double>(n);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  std::vector<std::vector<double>> cov(p, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      const double da = labels(i, a) - mean[a];
      for (std::size_t b = a; b < p; ++b) cov[a][b] += da * (labels(i, b) - mean[b]);
    }
  }
  double off = 0.0;
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      cov[a][b] /= denom;
      cov[b][a] = cov[a][b];
      if (a != b) off = std::max(off, std::abs(cov[a][b]));
    }
  }

  SMLFit fit;
  if (off < 1e-12) {
    fit.degenerate = true;
    fit.prediction = majority_vote(labels);
    fit.prediction.method = Method::sml;
    fit.prediction.flags.push_back("degenerate_covariance");
    fit.weights.assign(p, 1.0 / std::sqrt(static_cast<double>(p)));
    return fit;
  }

  std::vector<double> v(p, 1.0);
  for (int pass = 0; pass < 20; ++pass) {
    auto [vec, eig] = detail::shifted_power_iteration(cov, v, 10000, 1e-10);
    v = vec;
    for (std::size_t s = 0; s < p; ++s) cov[s][s] = eig * v[s] * v[s];
  }
  v = detail::shifted_power_iteration(cov, v, 10000, 1e-10).first;
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum < 0) {
    for (double& x : v) x = -x;
  }
  fit.weights = v;

  std::vector<double> margin(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < p; ++s) margin[i] += v[s] * labels(i, s);
  }
  const auto [lo, hi] = std::minmax_element(margin.begin(), margin.end());
  const double range = *hi - *lo;
  fit.prediction.method = Method::sml;
  fit.prediction.labels.resize(n);
  fit.prediction.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.prediction.labels[i] = sign_pos(margin[i]);
    fit.prediction.scores[i] = range > 0 ? (margin[i] - *lo) / range : 0.5;
  }
  return fit;
}

}  // namespace unelisa
