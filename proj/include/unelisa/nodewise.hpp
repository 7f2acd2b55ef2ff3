#pragma once

// Nodewise l1-regularized logistic regression.
//
// For a response node s with features f_t (t != s) the objective is
//
//   (1/n) sum_i log(exp(z_i) + exp(-z_i)) - sum_t theta_t mu_st + lambda |theta|_1,
//   z_i = sum_t theta_t f_t^(i),   mu_st = (1/n) sum_i f_s^(i) f_t^(i).
//
// The smooth part has gradient (1/n) sum_i tanh(z_i) f_t^(i) - mu_st and
// coordinate curvature (1/n) sum_i sech^2(z_i) <= 1. The estimate targets the
// approximating coupling theta_tilde itself, not 2 * theta_tilde.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "unelisa/core.hpp"
#include "unelisa/ising_approx.hpp"
#include "unelisa/oracle_enum.hpp"

namespace unelisa {

struct LassoLogisticProblem {
  NodeId response = 1;
  std::vector<NodeId> features;          // observed node ids, response excluded
  std::size_t n = 0;
  std::vector<std::vector<double>> columns;  // one +/-1 column per feature
  std::vector<double> mu_hat;            // per feature
  double lambda = 0.0;

  std::size_t dim() const { return features.size(); }
};

inline LassoLogisticProblem make_problem(const LabelMatrix& labels, NodeId s, double lambda) {
  if (s < 1 || static_cast<std::size_t>(s) > labels.p()) throw StructuralError("make_problem: response out of range");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw StructuralError("make_problem: lambda must be >= 0");
  LassoLogisticProblem prob;
  prob.response = s;
  prob.n = labels.n();
  prob.lambda = lambda;
  for (NodeId t = 1; t <= static_cast<NodeId>(labels.p()); ++t) {
    if (t == s) continue;
    prob.features.push_back(t);
    std::vector<double> col(labels.n());
    double mu = 0.0;
    for (std::size_t i = 0; i < labels.n(); ++i) {
      col[i] = labels.node(i, t);
      mu += labels.node(i, s) * labels.node(i, t);
    }
    prob.columns.push_back(std::move(col));
    prob.mu_hat.push_back(mu / static_cast<double>(labels.n()));
  }
  return prob;
}

namespace detail {

/// log(e^z + e^-z), stable for large |z|.
inline double log_two_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a));
}

inline std::vector<double> linear_predictor(const std::vector<double>& theta, const LassoLogisticProblem& prob) {
  std::vector<double> z(prob.n, 0.0);
  for (std::size_t t = 0; t < prob.dim(); ++t) {
    if (theta[t] == 0.0) continue;
    const auto& col = prob.columns[t];
    for (std::size_t i = 0; i < prob.n; ++i) z[i] += theta[t] * col[i];
  }
  return z;
}

inline void check_dim(const std::vector<double>& theta, const LassoLogisticProblem& prob) {
  if (theta.size() != prob.dim()) throw StructuralError("theta dimension does not match the problem");
}

}  // namespace detail

/// Smooth part of the objective (no penalty).
inline double smooth_loss(const std::vector<double>& theta, const LassoLogisticProblem& prob) {
  detail::check_dim(theta, prob);
  const auto z = detail::linear_predictor(theta, prob);
  double acc = 0.0;
  for (double zi : z) acc += detail::log_two_cosh(zi);
  double out = acc / static_cast<double>(prob.n);
  for (std::size_t t = 0; t < prob.dim(); ++t) out -= theta[t] * prob.mu_hat[t];
  return out;
}

inline double objective(const std::vector<double>& theta, const LassoLogisticProblem& prob) {
  double l1 = 0.0;
  for (double v : theta) {
    if (!std::isfinite(v)) throw StructuralError("objective: theta must be finite");
    l1 += std::abs(v);
  }
  return smooth_loss(theta, prob) + prob.lambda * l1;
}

inline std::vector<double> smooth_gradient(const std::vector<double>& theta, const LassoLogisticProblem& prob) {
  detail::check_dim(theta, prob);
  const auto z = detail::linear_predictor(theta, prob);
  std::vector<double> th(prob.n);
  for (std::size_t i = 0; i < prob.n; ++i) th[i] = std::tanh(z[i]);
  std::vector<double> g(prob.dim());
  for (std::size_t t = 0; t < prob.dim(); ++t) {
    double acc = 0.0;
    const auto& col = prob.columns[t];
    for (std::size_t i = 0; i < prob.n; ++i) acc += th[i] * col[i];
    g[t] = acc / static_cast<double>(prob.n) - prob.mu_hat[t];
  }
  return g;
}

/// Largest violation of the optimality conditions: |g_t| <= lambda where
/// theta_t = 0 and g_t + lambda sign(theta_t) = 0 elsewhere.
inline double kkt_residual(const std::vector<double>& theta, const std::vector<double>& grad, double lambda) {
  double r = 0.0;
  for (std::size_t t = 0; t < theta.size(); ++t) {
    const double v = theta[t] == 0.0 ? std::max(0.0, std::abs(grad[t]) - lambda)
                                     : std::abs(grad[t] + lambda * (theta[t] > 0 ? 1.0 : -1.0));
    r = std::max(r, v);
  }
  return r;
}

struct SolverOptions {
  double tol = 1e-6;
  int max_iter = 10000;  // full coordinate sweeps
};

struct LassoLogisticSolution {
  std::vector<double> theta_hat;
  double objective_value = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline double soft_threshold(double x, double a) {
  if (x > a) return x - a;
  if (x < -a) return x + a;
  return 0.0;
}

/// Cyclic coordinate descent with a proximal Newton step per coordinate and
/// backtracking on the exact one-dimensional objective. Stops once the KKT
/// residual is within tol; otherwise returns the last iterate unconverged.
inline LassoLogisticSolution solve(const LassoLogisticProblem& prob, const SolverOptions& opts = {}) {
  if (prob.lambda < 0.0) throw StructuralError("solve: lambda must be >= 0");
  const std::size_t d = prob.dim();
  const std::size_t n = prob.n;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double lambda = prob.lambda;

  LassoLogisticSolution sol;
  sol.theta_hat.assign(d, 0.0);
  std::vector<double>& theta = sol.theta_hat;
  std::vector<double> z(n, 0.0);
  std::vector<double> trial(n);

  auto coordinate_objective = [&](const std::vector<double>& zz, double theta_t, double mu) {
    double acc = 0.0;
    for (double zi : zz) acc += detail::log_two_cosh(zi);
    return acc * inv_n - theta_t * mu + lambda * std::abs(theta_t);
  };

  auto grad = smooth_gradient(theta, prob);
  sol.kkt_residual = kkt_residual(theta, grad, lambda);
  if (sol.kkt_residual <= opts.tol) {
    sol.converged = true;
    sol.objective_value = objective(theta, prob);
    return sol;
  }

  for (int sweep = 1; sweep <= opts.max_iter; ++sweep) {
    sol.iterations = sweep;
    for (std::size_t t = 0; t < d; ++t) {
      const auto& col = prob.columns[t];
      double g = 0.0;
      double h = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double th = std::tanh(z[i]);
        g += th * col[i];
        h += 1.0 - th * th;
      }
      g = g * inv_n - prob.mu_hat[t];
      h = std::max(h * inv_n, 1e-12);

      const double old = theta[t];
      // Skip coordinates already optimal.
      if (old == 0.0 && std::abs(g) <= lambda) continue;

      const double base = coordinate_objective(z, old, prob.mu_hat[t]);
      const double target = soft_threshold(old - g / h, lambda / h);
      const double step = target - old;
      if (step == 0.0) continue;

      const double model_decrease = g * step + lambda * (std::abs(target) - std::abs(old));
      if (std::abs(model_decrease) <= 1e-13 * std::max(1.0, std::abs(base))) {
        // Below the resolution of the objective: the line search cannot
        // discriminate, and near the optimum the Newton step contracts.
        for (std::size_t i = 0; i < n; ++i) z[i] += step * col[i];
        theta[t] = target;
        continue;
      }
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        const double cand = old + alpha * step;
        for (std::size_t i = 0; i < n; ++i) trial[i] = z[i] + (cand - old) * col[i];
        const double val = coordinate_objective(trial, cand, prob.mu_hat[t]);
        if (val <= base + 0.01 * alpha * model_decrease) {
          theta[t] = cand;
          z.swap(trial);
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        // Curvature of the smooth part never exceeds 1, so the unit-curvature
        // proximal step is a majorization step and cannot increase the objective.
        const double cand = soft_threshold(old - g, lambda);
        for (std::size_t i = 0; i < n; ++i) trial[i] = z[i] + (cand - old) * col[i];
        if (coordinate_objective(trial, cand, prob.mu_hat[t]) <= base) {
          theta[t] = cand;
          z.swap(trial);
        }
      }
    }
    for (double& v : theta) {
      if (std::abs(v) < 1e-10) v = 0.0;
    }
    z = detail::linear_predictor(theta, prob);
    grad = smooth_gradient(theta, prob);
    sol.kkt_residual = kkt_residual(theta, grad, lambda);
    if (sol.kkt_residual <= opts.tol) {
      sol.converged = true;
      break;
    }
  }
  sol.objective_value = objective(theta, prob);
  return sol;
}

inline double default_lambda(std::size_t p, std::size_t n) {
  return std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

enum class Symmetrize { or_rule, and_rule };

inline Symmetrize symmetrize_from_string(const std::string& s) {
  if (s == "or") return Symmetrize::or_rule;
  if (s == "and") return Symmetrize::and_rule;
  throw StructuralError("unknown symmetrization rule '" + s + "'");
}

struct NodewiseFit {
  NeighborhoodMap directed;  // raw per-node supports, possibly asymmetric
  std::vector<LassoLogisticSolution> solutions;  // index s-1
};

/// Runs one regression per observed node. A solver that fails to converge
/// raises NumericalError naming the node.
inline NodewiseFit fit_nodewise(const LabelMatrix& labels, double lambda, const SolverOptions& opts = {}) {
  if (labels.n() < 2) throw StructuralError("neighborhoods: need at least two instances");
  const int p = static_cast<int>(labels.p());
  NodewiseFit fit{NeighborhoodMap(p), {}};
  for (NodeId s = 1; s <= p; ++s) {
    const auto prob = make_problem(labels, s, lambda);
    auto sol = solve(prob, opts);
    if (!sol.converged) {
      throw NumericalError("nodewise regression for node " + std::to_string(s) + " did not converge (KKT residual " +
                           std::to_string(sol.kkt_residual) + ")");
    }
    for (std::size_t k = 0; k < prob.dim(); ++k) {
      if (sol.theta_hat[k] != 0.0) fit.directed.add(s, prob.features[k], sol.theta_hat[k]);
    }
    fit.solutions.push_back(std::move(sol));
  }
  return fit;
}

/// OR keeps (s,t) when either direction selected it, AND when both did; the
/// weight is the mean of the available nonzero estimates.
inline NeighborhoodMap symmetrize(const NeighborhoodMap& directed, Symmetrize rule) {
  NeighborhoodMap out(directed.p);
  for (NodeId s = 1; s <= directed.p; ++s) {
    for (NodeId t = s + 1; t <= directed.p; ++t) {
      const double a = directed.weight(s, t);
      const double b = directed.weight(t, s);
      const bool keep = rule == Symmetrize::or_rule ? (a != 0.0 || b != 0.0) : (a != 0.0 && b != 0.0);
      if (!keep) continue;
      double w = (a != 0.0 && b != 0.0) ? 0.5 * (a + b) : (a != 0.0 ? a : b);
      if (w == 0.0) w = std::abs(a) >= std::abs(b) ? a : b;  // opposite signs cancelled
      out.add(s, t, w);
      out.add(t, s, w);
    }
  }
  return out;
}

inline NeighborhoodMap neighborhoods(const LabelMatrix& labels, double lambda, Symmetrize rule = Symmetrize::or_rule,
                                     const SolverOptions& opts = {}) {
  return symmetrize(fit_nodewise(labels, lambda, opts).directed, rule);
}

// ---------------------------------------------------------------------------
// Fisher-information diagnostics of the approximating model at one node.
// ---------------------------------------------------------------------------

struct FisherDiagnostics {
  NodeId node = 0;
  std::vector<NodeId> neighborhood;   // induced neighborhood N
  std::vector<NodeId> complement;     // other observed nodes
  double lambda_min = 0.0;            // of I_NN; +inf when N is empty
  double lambda_max_second_moment = 0.0;  // of E[f f^T] over all nodes except s
  double irrepresentability = 0.0;    // ||I_{N^c N} I_NN^{-1}||_inf
  double alpha = 1.0;                 // 1 - irrepresentability
  bool empty_neighborhood = false;
  bool alpha_nonpositive = false;
};

/// Exact Fisher information I = E[sech^2(m) f f^T] of the approximating
/// model's conditional at node s, m = sum_t theta_tilde_st f_t, with the
/// expectation taken by enumeration. Requires p + 1 <= max_nodes.
inline FisherDiagnostics fisher_diagnostics(const IsingModelSpec& spec, NodeId s, int max_nodes = 16) {
  if (spec.p + 1 > max_nodes) {
    throw SizeError("fisher_diagnostics: p + 1 = " + std::to_string(spec.p + 1) + " exceeds the cap of " +
                    std::to_string(max_nodes));
  }
  if (s < 1 || s > spec.p) throw StructuralError("fisher_diagnostics: node out of range");
  const ApproxModel approx = approximate(spec);
  const ExactDistribution q = enumerate(approx.to_pairwise(), max_nodes);

  FisherDiagnostics out;
  out.node = s;
  std::vector<NodeId> others;
  for (NodeId t = 1; t <= spec.p; ++t) {
    if (t == s) continue;
    others.push_back(t);
    if (approx.weight(s, t) != 0.0) {
      out.neighborhood.push_back(t);
    } else {
      out.complement.push_back(t);
    }
  }
  const auto k = static_cast<Eigen::Index>(others.size());
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(k, k);
  std::vector<double> w(others.size());
  for (std::size_t a = 0; a < others.size(); ++a) w[a] = approx.weight(s, others[a]);

  Eigen::VectorXd f(k);
  for_each_state(q, [&](const std::vector<int>& y, double prob) {
    double m = 0.0;
    for (std::size_t a = 0; a < others.size(); ++a) {
      f(static_cast<Eigen::Index>(a)) = y[static_cast<std::size_t>(others[a] - 1)];
      m += w[a] * f(static_cast<Eigen::Index>(a));
    }
    const double c = std::cosh(m);
    const double h = 1.0 / (c * c);
    info.noalias() += (prob * h) * f * f.transpose();
    second.noalias() += prob * f * f.transpose();
  });

  out.lambda_max_second_moment = k > 0 ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(second).eigenvalues().maxCoeff() : 0.0;

  auto index_of = [&](NodeId t) {
    return static_cast<Eigen::Index>(std::find(others.begin(), others.end(), t) - others.begin());
  };
  const auto nn = static_cast<Eigen::Index>(out.neighborhood.size());
  const auto nc = static_cast<Eigen::Index>(out.complement.size());
  if (nn == 0) {
    out.empty_neighborhood = true;
    out.lambda_min = std::numeric_limits<double>::infinity();
    out.irrepresentability = 0.0;
    out.alpha = 1.0;
    return out;
  }
  Eigen::MatrixXd inn(nn, nn);
  Eigen::MatrixXd icn(nc, nn);
  for (Eigen::Index a = 0; a < nn; ++a) {
    for (Eigen::Index b = 0; b < nn; ++b) inn(a, b) = info(index_of(out.neighborhood[a]), index_of(out.neighborhood[b]));
    for (Eigen::Index c = 0; c < nc; ++c) icn(c, a) = info(index_of(out.complement[c]), index_of(out.neighborhood[a]));
  }
  out.lambda_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(inn).eigenvalues().minCoeff();
  if (nc > 0) {
    const Eigen::MatrixXd ratio = inn.ldlt().solve(icn.transpose()).transpose();
    out.irrepresentability = ratio.cwiseAbs().rowwise().sum().maxCoeff();
  }
  out.alpha = 1.0 - out.irrepresentability;
  out.alpha_nonpositive = out.alpha <= 0.0;
  return out;
}

}  // namespace unelisa
