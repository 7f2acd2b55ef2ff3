// Acceptance runner. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any selected criterion fails.
//
//   acceptance                 run all ten
//   acceptance --criterion 6   run one

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/lasso_fixtures.hpp"
#include "unelisa/baselines.hpp"
#include "unelisa/gibbs.hpp"
#include "unelisa/harness.hpp"
#include "unelisa/ising_approx.hpp"
#include "unelisa/metrics.hpp"
#include "unelisa/nodewise.hpp"
#include "unelisa/oracle_enum.hpp"
#include "unelisa/predict.hpp"
#include "unelisa/prune.hpp"
#include "unelisa/rng.hpp"

using namespace unelisa;

namespace {

// Tolerances and thresholds.
constexpr double kC1MaxMillis = 1.0;
constexpr double kC2MomentTol = 1e-9;
constexpr double kC2Step = 1e-3;
constexpr double kC2Slack = 1e-10;
constexpr int kC3Draws = 1000;
constexpr int kC4Samples = 50000;
constexpr double kC4Tol = 0.02;
constexpr double kC5Kkt = 1e-6;
constexpr double kC5Objective = 1e-8;
constexpr double kC5Gradient = 1e-6;
constexpr int kBenchTrials = 50;
constexpr double kC7Gap = 0.2;
constexpr double kC9Slack = 1e-10;
constexpr double kC10Auc = 1e-12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string join(const NodeSet& s) {
  std::string out = "{";
  for (NodeId v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BenchConfig bench(std::vector<int> ps, std::vector<D0Rule> rules, std::vector<Snr> snrs, std::vector<Method> methods) {
  BenchConfig cfg;
  cfg.p_list = std::move(ps);
  cfg.d0_rules = std::move(rules);
  cfg.snrs = std::move(snrs);
  cfg.methods = std::move(methods);
  cfg.trials = kBenchTrials;
  cfg.lambda_rule = LambdaRule::logit;
  return cfg;
}

double cell_mean(const BenchmarkResult& r, int p, D0Rule rule, Snr snr, const std::string& metric) {
  const auto* c = r.find(p, rule, snr, metric);
  return c ? c->mean : std::nan("");
}

// ---------------------------------------------------------------------------

Outcome c1() {
  const auto nbhd = approximate(fixtures::figure1_graph()).neighborhoods();
  const int reps = 1000;
  const auto t0 = std::chrono::steady_clock::now();
  PruneResult res;
  for (int i = 0; i < reps; ++i) res = reconstruct_n0(nbhd);
  const double ms = 1000.0 * seconds_since(t0) / reps;
  const NodeSet want{1, 2, 3, 4, 5};
  const bool ok = res.report.expert_set_hat == want && ms < kC1MaxMillis;
  return {ok, "Figure-1 pruning returned " + join(res.report.expert_set_hat) + " in " + fmt("%.4f", ms) + " ms"};
}

Outcome c2() {
  int moment_fail = 0, kl_fail = 0, high_degree = 0;
  double worst_moment = 0.0, worst_kl_drop = 0.0;
  std::string failing;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < 20; ++k) {
    const int p = 3 + k % 3;
    const int d0 = 2 + (k / 3) % (p - 1);
    IsingModelSpec spec;
    for (std::uint64_t seed = 1000 + k;; seed += 100) {
      spec = fixtures::random_valid_spec(p, d0, seed);
      if (validate_model(spec).empty()) break;
    }
    if (d0 >= 3) ++high_degree;
    const auto truth = marginalize_out_node0(enumerate(spec));
    const auto approx = approximate(spec);
    const auto q = enumerate(approx.to_pairwise());
    double err = 0.0;
    for (NodeId s = 1; s <= p; ++s) {
      for (NodeId t = s + 1; t <= p; ++t) err = std::max(err, std::abs(pair_moment(truth, s, t) - pair_moment(q, s, t)));
    }
    worst_moment = std::max(worst_moment, err);
    const double base = kl_divergence(truth, q);
    double drop = 0.0;
    for (NodeId s = 1; s <= p; ++s) {
      for (NodeId t = s + 1; t <= p; ++t) {
        for (double dir : {-1.0, 1.0}) {
          PairwiseIsing m(p, 1);
          for (NodeId a = 1; a <= p; ++a) {
            for (NodeId b = a + 1; b <= p; ++b) {
              const double w = approx.weight(a, b) + (a == s && b == t ? dir * kC2Step : 0.0);
              if (w != 0.0) m.add_coupling(a, b, w);
            }
          }
          drop = std::max(drop, base - kl_divergence(truth, enumerate(m)));
        }
      }
    }
    worst_kl_drop = std::max(worst_kl_drop, drop);
    const bool mfail = err > kC2MomentTol;
    const bool kfail = drop > kC2Slack;
    moment_fail += mfail;
    kl_fail += kfail;
    if (mfail || kfail) failing += " (p=" + std::to_string(p) + ",d0=" + std::to_string(d0) + ")";
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "20 specs (" << high_degree << " with d0>=3): moment mismatches " << moment_fail << ", worst "
     << fmt("%.3g", worst_moment) << "; KL decreases under perturbation " << kl_fail << ", worst "
     << fmt("%.3g", worst_kl_drop) << "; " << fmt("%.2f", secs) << " s";
  if (!failing.empty()) os << "; failing:" << failing;
  return {moment_fail == 0 && kl_fail == 0 && secs < 30.0, os.str()};
}

Outcome c3() {
  Rng rng(20240501);
  int wrong_sign = 0, zeros = 0;
  auto draw = [&] {
    const double mag = 3.0 * rng.uniform01() * std::pow(10.0, -6.0 * rng.uniform01());
    return rng.sign() * std::max(mag, 1e-9);
  };
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < kC3Draws; ++i) {
    const double a = draw(), b = draw(), th0 = 6.0 * rng.uniform01() - 3.0;
    const double v = theta_tilde_pair(a, b, th0);
    if (v == 0.0) {
      ++zeros;
    } else if ((v > 0) != (a * b > 0)) {
      ++wrong_sign;
    }
  }
  const double secs = seconds_since(t0);
  return {wrong_sign == 0 && zeros == 0 && secs < 1.0,
          std::to_string(kC3Draws) + " draws: " + std::to_string(wrong_sign) + " sign exceptions, " +
              std::to_string(zeros) + " zero values, " + fmt("%.4f", secs) + " s"};
}

Outcome c4() {
  const auto spec = IsingModelSpec::from_edges(2, 0.3, {{{0, 1}, 0.8}, {{1, 2}, -0.6}});
  const auto model = PairwiseIsing::from_spec(spec);
  const auto exact = enumerate(model);
  GibbsConfig cfg;
  cfg.n_samples = kC4Samples;
  cfg.seed = 7;
  const auto t0 = std::chrono::steady_clock::now();
  const auto states = sample_states(model, cfg);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  std::ostringstream os;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      double acc = 0.0;
      for (const auto& y : states) acc += y[a] * y[b];
      const double emp = acc / static_cast<double>(states.size());
      const double ex = pair_moment(exact, a, b);
      worst = std::max(worst, std::abs(emp - ex));
      os << " E[f" << a << "f" << b << "] " << fmt("%.4f", emp) << " vs " << fmt("%.4f", ex) << ';';
    }
  }
  return {worst <= kC4Tol && secs < 60.0,
          "3-node chain, " + std::to_string(states.size()) + " samples:" + os.str() + " worst " + fmt("%.4f", worst) +
              ", " + fmt("%.2f", secs) + " s"};
}

Outcome c5() {
  double worst_kkt = 0.0, worst_obj = 0.0, worst_grad = 0.0;
  int problems = 0;
  auto grad_check = [&](const LassoLogisticProblem& prob, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> th(prob.dim());
    for (double& v : th) v = rng.uniform01() - 0.5;
    const auto g = smooth_gradient(th, prob);
    const double h = 1e-6;
    for (std::size_t j = 0; j < th.size(); ++j) {
      auto up = th, dn = th;
      up[j] += h;
      dn[j] -= h;
      const double fd = (smooth_loss(up, prob) - smooth_loss(dn, prob)) / (2.0 * h);
      worst_grad = std::max(worst_grad, std::abs(fd - g[j]));
    }
  };
  const auto cases = fixtures::lasso_cases();
  for (const auto& c : cases) {
    const auto prob = make_problem(c.labels, c.response, c.lambda);
    const auto sol = solve(prob);
    worst_kkt = std::max(worst_kkt, sol.kkt_residual);
    worst_obj = std::max(worst_obj, std::abs(sol.objective_value - c.objective));
    grad_check(prob, 11 + problems);
    ++problems;
  }
  // Every node of a sampled Figure-1 dataset at the default lambda.
  GibbsConfig gc;
  gc.n_samples = 500;
  gc.seed = 3;
  const auto data = sample(fixtures::figure1_graph(), gc);
  for (NodeId s = 1; s <= static_cast<NodeId>(data.p()); ++s) {
    const auto prob = make_problem(data, s, default_lambda(data.p(), data.n()));
    worst_kkt = std::max(worst_kkt, solve(prob).kkt_residual);
    grad_check(prob, 100 + s);
    ++problems;
  }
  const bool ok = cases.size() == 10 && worst_kkt <= kC5Kkt && worst_obj <= kC5Objective && worst_grad <= kC5Gradient;
  return {ok, std::to_string(problems) + " problems: worst KKT " + fmt("%.3g", worst_kkt) + ", worst |objective - oracle| " +
                  fmt("%.3g", worst_obj) + " over " + std::to_string(cases.size()) + " datasets, worst gradient error " +
                  fmt("%.3g", worst_grad)};
}

Outcome c6() {
  auto cfg = bench({25}, {D0Rule::sqrt, D0Rule::log}, {Snr::high}, {Method::bayes, Method::amv, Method::mv});
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_benchmark(cfg);
  const double secs = seconds_since(t0);
  const double hit5 = cell_mean(r, 25, D0Rule::sqrt, Snr::high, "hit_rate");
  const double prec5 = cell_mean(r, 25, D0Rule::sqrt, Snr::high, "precision");
  const double bayes5 = cell_mean(r, 25, D0Rule::sqrt, Snr::high, "bayes");
  const double amv5 = cell_mean(r, 25, D0Rule::sqrt, Snr::high, "amv");
  const double hit3 = cell_mean(r, 25, D0Rule::log, Snr::high, "hit_rate");
  const double bayes3 = cell_mean(r, 25, D0Rule::log, Snr::high, "bayes");
  const bool ok = hit5 >= 0.95 && prec5 >= 0.95 && bayes5 >= 0.95 && amv5 >= 0.95 && hit3 >= 0.93 && bayes3 >= 0.90;

  cfg.lambda_rule = LambdaRule::rate;
  const auto rr = run_benchmark(cfg);
  std::ostringstream os;
  os << "p=25 d0=5: hit " << fmt("%.3f", hit5) << " prec " << fmt("%.3f", prec5) << " bayes " << fmt("%.3f", bayes5)
     << " amv " << fmt("%.3f", amv5) << "; d0=3: hit " << fmt("%.3f", hit3) << " bayes " << fmt("%.3f", bayes3) << " ("
     << kBenchTrials << " trials, " << fmt("%.1f", secs) << " s). Rate-rule lambda for reference: d0=5 hit "
     << fmt("%.3f", cell_mean(rr, 25, D0Rule::sqrt, Snr::high, "hit_rate")) << " prec "
     << fmt("%.3f", cell_mean(rr, 25, D0Rule::sqrt, Snr::high, "precision")) << " bayes "
     << fmt("%.3f", cell_mean(rr, 25, D0Rule::sqrt, Snr::high, "bayes")) << "; d0=3 hit "
     << fmt("%.3f", cell_mean(rr, 25, D0Rule::log, Snr::high, "hit_rate")) << " bayes "
     << fmt("%.3f", cell_mean(rr, 25, D0Rule::log, Snr::high, "bayes"));
  return {ok, os.str()};
}

Outcome c7() {
  const auto cfg = bench({25}, {D0Rule::sqrt}, {Snr::medium}, {Method::bayes, Method::mv});
  const auto r = run_benchmark(cfg);
  const double bayes = cell_mean(r, 25, D0Rule::sqrt, Snr::medium, "bayes");
  const double mv = cell_mean(r, 25, D0Rule::sqrt, Snr::medium, "mv");
  return {bayes - mv >= kC7Gap, "p=25 d0=5 medium SNR: bayes " + fmt("%.3f", bayes) + ", mv " + fmt("%.3f", mv) +
                                    ", gap " + fmt("%.3f", bayes - mv)};
}

Outcome c8() {
  const auto cfg = bench({25, 49}, {D0Rule::log, D0Rule::sqrt, D0Rule::quarter}, {Snr::high, Snr::low}, {Method::mv});
  const auto r = run_benchmark(cfg);
  int violations = 0;
  std::ostringstream os;
  for (int p : cfg.p_list) {
    for (D0Rule rule : cfg.d0_rules) {
      const double hi = cell_mean(r, p, rule, Snr::high, "hit_rate");
      const double lo = cell_mean(r, p, rule, Snr::low, "hit_rate");
      const bool bad = !(hi >= lo);
      violations += bad;
      os << " p=" << p << " d0=" << d0_for(rule, p) << " " << fmt("%.3f", hi) << "/" << fmt("%.3f", lo)
         << (bad ? "*" : "") << ';';
    }
  }
  return {violations == 0, "hit rate high/low (* = inverted):" + os.str() + " " + std::to_string(violations) +
                               " inverted of " + std::to_string(cfg.p_list.size() * cfg.d0_rules.size())};
}

Outcome c9() {
  const auto cfg = bench({25}, {D0Rule::log, D0Rule::sqrt, D0Rule::quarter}, {Snr::high, Snr::medium, Snr::low},
                         {Method::bayes, Method::ds});
  const auto r = run_benchmark(cfg);
  int lb_bad = 0, ds_bad = 0, elbo_bad = 0, failed = 0;
  double lb_worst = 0.0, ds_worst = 0.0, elbo_worst = 0.0;
  for (const auto& t : r.trials) {
    if (t.failed) {
      ++failed;
      continue;
    }
    lb_bad += t.em_lower_bound_drop > kC9Slack;
    ds_bad += t.ds_log_likelihood_drop > kC9Slack;
    elbo_bad += t.em_elbo_drop > kC9Slack;
    lb_worst = std::max(lb_worst, t.em_lower_bound_drop);
    ds_worst = std::max(ds_worst, t.ds_log_likelihood_drop);
    elbo_worst = std::max(elbo_worst, t.em_elbo_drop);
  }
  std::ostringstream os;
  os << r.trials.size() << " trials: expected complete-data bound decreased in " << lb_bad << " (worst drop "
     << fmt("%.3g", lb_worst) << "); DS log-likelihood decreased in " << ds_bad << " (worst " << fmt("%.3g", ds_worst)
     << "); ELBO decreased in " << elbo_bad << " (worst " << fmt("%.3g", elbo_worst) << "); failed trials " << failed;
  return {lb_bad == 0 && ds_bad == 0 && failed == 0, os.str()};
}

double auc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1 || y[j] != -1) continue;
      den += 1.0;
      num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return num / den;
}

Outcome c10() {
  int bad = 0;
  auto check = [&](bool ok) { bad += !ok; };
  auto m = recovery({1, 2, 6}, {1, 2, 3});
  check(m.hit_rate == 2.0 / 3.0 && m.precision == 2.0 / 3.0);
  m = recovery({1, 2, 3, 4}, {1, 2});
  check(m.hit_rate == 1.0 && m.precision == 0.5);
  m = recovery({}, {1, 2, 3});
  check(m.hit_rate == 0.0 && m.precision == 0.0 && m.empty_estimate);

  PredictionResult pred;
  pred.labels = {1, -1, -1, -1};
  pred.scores = {0.9, 0.4, 0.2, 0.1};
  const auto cm = classification(pred, {1, 1, -1, -1});
  check(cm.counts.tp == 1 && cm.counts.fp == 0 && cm.counts.tn == 2 && cm.counts.fn == 1);
  check(cm.ppv == 1.0 && cm.npv == 2.0 / 3.0 && cm.f_score == 0.8 && cm.accuracy == 0.75);

  double worst = 0.0;
  Rng rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 5 + rng.below(300);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rep % 2 == 0 ? std::floor(10.0 * rng.uniform01()) : rng.uniform01();
      y[i] = rng.sign();
    }
    y[0] = 1;
    y[1] = -1;
    worst = std::max(worst, std::abs(auc_rank(s, y) - auc_pairs(s, y)));
  }
  return {bad == 0 && worst <= kC10Auc,
          std::to_string(bad) + " hand-case mismatches; AUC worst |rank - pairwise| over 50 score sets " +
              fmt("%.3g", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> all{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  bool ok = true;
  for (int k = 1; k <= 10; ++k) {
    if (only != 0 && k != only) continue;
    Outcome o;
    try {
      o = all[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
