#pragma once

// Synthetic experiments: random G1-G3 graphs at a chosen SNR, Gibbs samples,
// the full prune-and-predict pipeline, and per-cell aggregation.
//
// Seeds. Every trial owns independent streams
//   graph  derive_seed(seed, {p, d0, snr, trial, 0})
//   gibbs  derive_seed(seed, {p, d0, snr, trial, 1})
// so a trial's result does not depend on which other trials ran or in what
// order.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "unelisa/baselines.hpp"
#include "unelisa/core.hpp"
#include "unelisa/gibbs.hpp"
#include "unelisa/io.hpp"
#include "unelisa/metrics.hpp"
#include "unelisa/nodewise.hpp"
#include "unelisa/predict.hpp"
#include "unelisa/prune.hpp"
#include "unelisa/rng.hpp"

namespace unelisa {

enum class Snr { high, medium, low };

inline std::string to_string(Snr s) {
  switch (s) {
    case Snr::high: return "high";
    case Snr::medium: return "medium";
    case Snr::low: return "low";
  }
  return "?";
}

inline Snr snr_from_string(const std::string& s) {
  if (s == "high") return Snr::high;
  if (s == "medium") return Snr::medium;
  if (s == "low") return Snr::low;
  throw FormatError("unknown snr '" + s + "' (expected high, medium or low)");
}

/// Magnitude of the non-expert couplings; expert couplings are always 1.
inline double non_expert_weight(Snr s) {
  switch (s) {
    case Snr::high: return 0.25;
    case Snr::medium: return 0.5;
    case Snr::low: return 1.0;
  }
  return 0.0;
}

enum class D0Rule { log, sqrt, quarter };

inline std::string to_string(D0Rule r) {
  switch (r) {
    case D0Rule::log: return "log";
    case D0Rule::sqrt: return "sqrt";
    case D0Rule::quarter: return "quarter";
  }
  return "?";
}

inline D0Rule d0_rule_from_string(const std::string& s) {
  if (s == "log") return D0Rule::log;
  if (s == "sqrt") return D0Rule::sqrt;
  if (s == "quarter") return D0Rule::quarter;
  throw FormatError("unknown d0_rule '" + s + "' (expected log, sqrt or quarter)");
}

/// round(rule(p)) with a floor of 3.
inline int d0_for(D0Rule rule, int p) {
  double v = 0.0;
  switch (rule) {
    case D0Rule::log: v = std::log(static_cast<double>(p)); break;
    case D0Rule::sqrt: v = std::sqrt(static_cast<double>(p)); break;
    case D0Rule::quarter: v = static_cast<double>(p) / 4.0; break;
  }
  return std::max(3, static_cast<int>(std::lround(v)));
}

/// Experts 1..d0 hang off node 0 with weight +1 (probability 0.7) or -1,
/// conditioned on more positive than negative experts.
/// Nodes d0+1..p attach one at a time to a uniformly chosen placed node whose
/// observed degree is still below d0 - 2, so every observed degree stays
/// within G1. When no placed node has room (possible only for d0 = 3) the
/// node starts a new component and may receive later attachments.
inline IsingModelSpec generate_graph(int p, int d0, Snr snr, std::uint64_t seed) {
  if (d0 < 2 || d0 > p) throw StructuralError("generate_graph: need 2 <= d0 <= p");
  const int cap = d0 - 2;
  if (cap < 1 && p > d0) {
    throw StructuralError("generate_graph: d0 = " + std::to_string(d0) +
                          " leaves no degree budget for non-expert nodes under G1");
  }
  Rng rng(seed);
  const double w = non_expert_weight(snr);
  std::map<Edge, double> edges;
  std::vector<int> degree(static_cast<std::size_t>(p) + 1, 0);
  // Signs are redrawn until positive experts hold a strict majority.
  std::vector<double> sign(static_cast<std::size_t>(d0) + 1, 1.0);
  for (;;) {
    int positive = 0;
    for (NodeId s = 1; s <= d0; ++s) {
      sign[s] = rng.bernoulli(0.7) ? 1.0 : -1.0;
      positive += sign[s] > 0;
    }
    if (2 * positive > d0) break;
  }
  for (NodeId s = 1; s <= d0; ++s) edges[make_edge(0, s)] = sign[s];
  std::vector<NodeId> placed;
  for (NodeId s = 1; s <= d0; ++s) placed.push_back(s);
  for (NodeId s = d0 + 1; s <= p; ++s) {
    std::vector<NodeId> open;
    for (NodeId r : placed) {
      if (degree[r] < cap) open.push_back(r);
    }
    if (!open.empty()) {
      const NodeId parent = open[rng.below(open.size())];
      edges[make_edge(parent, s)] = rng.bernoulli(0.5) ? w : -w;
      ++degree[parent];
      ++degree[s];
    }
    placed.push_back(s);
  }
  auto spec = IsingModelSpec::from_edges(p, 0.0, edges);
  const auto violations = validate_model(spec);
  if (!violations.empty()) throw StructuralError("generate_graph: produced invalid graph: " + violations.front().message);
  return spec;
}

/// rate:  lambda = sqrt(log p / n) on theta, as in the objective.
/// logit: sqrt(log p / n) on the usual logistic coefficient beta = 2 theta,
///        which is 2 sqrt(log p / n) on theta.
/// fixed: a given value.
enum class LambdaRule { rate, logit, fixed };

inline double rule_lambda(LambdaRule rule, std::size_t p, std::size_t n) {
  if (rule == LambdaRule::fixed) throw StructuralError("rule_lambda: fixed rule has no formula");
  const double base = default_lambda(p, n);
  return rule == LambdaRule::logit ? 2.0 * base : base;
}

struct BenchConfig {
  std::vector<int> p_list{25, 49, 81};
  std::vector<D0Rule> d0_rules{D0Rule::log, D0Rule::sqrt, D0Rule::quarter};
  std::vector<Snr> snrs{Snr::high};
  int trials = 50;
  std::uint64_t seed = 0;
  int n_scale = 30;
  LambdaRule lambda_rule = LambdaRule::rate;
  double fixed_lambda = 0.0;  // used when lambda_rule is fixed
  Symmetrize symmetrize = Symmetrize::or_rule;
  std::vector<Method> methods{Method::bayes, Method::amv, Method::sml, Method::ds, Method::mv};
  std::string out_dir = ".";
  int threads = 1;
  int burn_in_sweeps = 1000;

  void validate() const {
    if (trials < 1) throw StructuralError("BenchConfig: trials must be >= 1");
    if (n_scale < 1) throw StructuralError("BenchConfig: n_scale must be >= 1");
    if (threads < 1) throw StructuralError("BenchConfig: threads must be >= 1");
    if (p_list.empty() || d0_rules.empty() || snrs.empty()) throw StructuralError("BenchConfig: empty sweep");
    for (int p : p_list) {
      if (p < 4) throw StructuralError("BenchConfig: every p must be >= 4");
    }
    if (lambda_rule == LambdaRule::fixed && !(fixed_lambda > 0.0)) {
      throw StructuralError("BenchConfig: lambda must be positive");
    }
  }

  bool runs(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& part : io::detail::split(s, ',')) {
    auto t = io::detail::trim(part);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace detail

/// Applies one `key = value` setting; list values are comma separated.
inline void apply_setting(BenchConfig& cfg, const std::string& key, const std::string& value) {
  auto as_int = [&](const std::string& v) { return io::detail::parse_int(v, 0); };
  if (key == "p_list") {
    cfg.p_list.clear();
    for (const auto& v : detail::split_list(value)) cfg.p_list.push_back(as_int(v));
  } else if (key == "d0_rule") {
    cfg.d0_rules.clear();
    for (const auto& v : detail::split_list(value)) cfg.d0_rules.push_back(d0_rule_from_string(v));
  } else if (key == "snr") {
    cfg.snrs.clear();
    for (const auto& v : detail::split_list(value)) cfg.snrs.push_back(snr_from_string(v));
  } else if (key == "trials") {
    cfg.trials = as_int(value);
  } else if (key == "seed") {
    try {
      cfg.seed = std::stoull(value);
    } catch (const std::exception&) {
      throw FormatError("seed must be a non-negative integer, got '" + value + "'");
    }
  } else if (key == "n_scale") {
    cfg.n_scale = as_int(value);
  } else if (key == "lambda_rule") {
    if (value == "rate" || value == "default" || value == "sqrt(log p / n)") {
      cfg.lambda_rule = LambdaRule::rate;
    } else if (value == "logit") {
      cfg.lambda_rule = LambdaRule::logit;
    } else {
      cfg.lambda_rule = LambdaRule::fixed;
      cfg.fixed_lambda = io::detail::parse_double(value, 0);
    }
  } else if (key == "symmetrize") {
    try {
      cfg.symmetrize = symmetrize_from_string(value);
    } catch (const StructuralError& e) {
      throw FormatError(e.what());
    }
  } else if (key == "methods") {
    cfg.methods.clear();
    for (const auto& v : detail::split_list(value)) {
      try {
        cfg.methods.push_back(method_from_string(v));
      } catch (const StructuralError& e) {
        throw FormatError(e.what());
      }
    }
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "threads") {
    cfg.threads = as_int(value);
  } else if (key == "burn_in_sweeps") {
    cfg.burn_in_sweeps = as_int(value);
  } else {
    throw FormatError("unknown config key '" + key + "'");
  }
}

inline BenchConfig parse_config(std::istream& in) {
  BenchConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto t = io::detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(cfg, io::detail::trim(t.substr(0, eq)), io::detail::trim(t.substr(eq + 1)));
    } catch (const FormatError& e) {
      throw FormatError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

inline BenchConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config '" + path + "'");
  return parse_config(in);
}

struct TrialRecord {
  int p = 0;
  int d0 = 0;
  D0Rule d0_rule = D0Rule::sqrt;
  Snr snr = Snr::high;
  int trial = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t gibbs_seed = 0;
  std::size_t n = 0;
  double lambda = 0.0;

  bool failed = false;
  std::string error;

  RecoveryMetrics recovery;
  std::size_t experts_found = 0;
  std::map<Method, double> accuracy;
  std::map<Method, bool> fallback;  // method answered with majority vote instead
  std::vector<std::string> flags;

  // Largest decrease of each EM objective between consecutive iterations;
  // zero or negative means the sequence never went down.
  double em_lower_bound_drop = 0.0;
  double em_elbo_drop = 0.0;
  double ds_log_likelihood_drop = 0.0;

  double seconds_sample = 0.0;
  double seconds_neighborhoods = 0.0;
  double seconds_predict = 0.0;
};

struct CellSummary {
  int p = 0;
  int d0 = 0;
  D0Rule d0_rule = D0Rule::sqrt;
  Snr snr = Snr::high;
  std::string metric;
  double mean = 0.0;
  double sd = 0.0;
  int trials = 0;    // values contributing to the mean
  int failures = 0;  // trials that errored or fell back
};

struct BenchmarkResult {
  std::vector<TrialRecord> trials;
  std::vector<CellSummary> cells;

  const CellSummary* find(int p, D0Rule rule, Snr snr, const std::string& metric) const {
    for (const auto& c : cells) {
      if (c.p == p && c.d0_rule == rule && c.snr == snr && c.metric == metric) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline double max_drop(const std::vector<double>& xs) {
  double worst = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) worst = std::max(worst, xs[i - 1] - xs[i]);
  return worst;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline std::size_t sample_size(int n_scale, int approx_degree_max, int p) {
  return static_cast<std::size_t>(
      std::ceil(static_cast<double>(n_scale) * approx_degree_max * std::log(static_cast<double>(p))));
}

/// One trial of one cell. Errors are captured in the record.
inline TrialRecord run_trial(const BenchConfig& cfg, int p, D0Rule rule, Snr snr, int trial) {
  TrialRecord rec;
  rec.p = p;
  rec.d0_rule = rule;
  rec.d0 = d0_for(rule, p);
  rec.snr = snr;
  rec.trial = trial;
  rec.graph_seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(rec.d0),
                                          static_cast<std::uint64_t>(snr), static_cast<std::uint64_t>(trial), 0});
  rec.gibbs_seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(rec.d0),
                                          static_cast<std::uint64_t>(snr), static_cast<std::uint64_t>(trial), 1});
  try {
    auto t0 = std::chrono::steady_clock::now();
    const auto spec = generate_graph(p, rec.d0, snr, rec.graph_seed);
    rec.n = sample_size(cfg.n_scale, degree_stats(spec).approx_degree_max, p);
    GibbsConfig gc;
    gc.burn_in_sweeps = cfg.burn_in_sweeps;
    gc.n_samples = static_cast<int>(rec.n);
    gc.seed = rec.gibbs_seed;
    const auto data = sample(spec, gc);
    const auto& truth = *data.truth();
    rec.seconds_sample = detail::seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    rec.lambda = cfg.lambda_rule == LambdaRule::fixed ? cfg.fixed_lambda
                                                      : rule_lambda(cfg.lambda_rule, data.p(), data.n());
    const auto nbhd = neighborhoods(data, rec.lambda, cfg.symmetrize);
    const auto pruned = reconstruct_n0(nbhd);
    rec.seconds_neighborhoods = detail::seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    rec.recovery = recovery(pruned.report.expert_set_hat, spec.expert_set);
    rec.experts_found = pruned.report.expert_set_hat.size();
    const std::vector<NodeId> experts(pruned.report.expert_set_hat.begin(), pruned.report.expert_set_hat.end());
    std::optional<PredictionResult> mv;
    auto get_mv = [&]() -> const PredictionResult& {
      if (!mv) mv = majority_vote(data);
      return *mv;
    };
    if (experts.empty()) rec.flags.push_back("empty_expert_set");

    if (cfg.runs(Method::bayes)) {
      if (experts.empty()) {
        rec.accuracy[Method::bayes] = accuracy(get_mv().labels, truth);
        rec.fallback[Method::bayes] = true;
      } else {
        const auto fit = em_fit(data, experts);
        rec.em_lower_bound_drop = detail::max_drop(fit.lower_bound_history);
        rec.em_elbo_drop = detail::max_drop(fit.elbo_history);
        if (!fit.converged) rec.flags.push_back("em_not_converged");
        rec.accuracy[Method::bayes] = accuracy(bayes_classify(fit.report, data).labels, truth);
        rec.fallback[Method::bayes] = false;
      }
    }
    if (cfg.runs(Method::amv)) {
      if (experts.empty()) {
        rec.accuracy[Method::amv] = accuracy(get_mv().labels, truth);
        rec.fallback[Method::amv] = true;
      } else {
        rec.accuracy[Method::amv] = accuracy(augmented_majority_vote(experts, nbhd, data).labels, truth);
        rec.fallback[Method::amv] = false;
      }
    }
    if (cfg.runs(Method::sml)) {
      const auto fit = sml(data);
      rec.accuracy[Method::sml] = accuracy(fit.prediction.labels, truth);
      rec.fallback[Method::sml] = fit.degenerate;
    }
    if (cfg.runs(Method::ds)) {
      const auto fit = dawid_skene(data);
      rec.ds_log_likelihood_drop = detail::max_drop(fit.log_likelihood_history);
      if (!fit.converged) rec.flags.push_back("ds_not_converged");
      rec.accuracy[Method::ds] = accuracy(fit.prediction.labels, truth);
      rec.fallback[Method::ds] = false;
    }
    if (cfg.runs(Method::mv)) {
      rec.accuracy[Method::mv] = accuracy(get_mv().labels, truth);
      rec.fallback[Method::mv] = false;
    }
    rec.seconds_predict = detail::seconds_since(t0);
  } catch (const Error& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

/// Metric names in table column order.
inline std::vector<std::string> table_metrics(const BenchConfig& cfg) {
  std::vector<std::string> out{"hit_rate", "precision"};
  for (Method m : {Method::bayes, Method::amv, Method::sml, Method::ds, Method::mv}) {
    if (cfg.runs(m)) out.push_back(to_string(m));
  }
  return out;
}

inline std::vector<CellSummary> aggregate(const BenchConfig& cfg, const std::vector<TrialRecord>& trials) {
  std::vector<CellSummary> out;
  const auto metrics = table_metrics(cfg);
  for (int p : cfg.p_list) {
    for (D0Rule rule : cfg.d0_rules) {
      for (Snr snr : cfg.snrs) {
        for (const auto& metric : metrics) {
          CellSummary c;
          c.p = p;
          c.d0 = d0_for(rule, p);
          c.d0_rule = rule;
          c.snr = snr;
          c.metric = metric;
          std::vector<double> xs;
          for (const auto& r : trials) {
            if (r.p != p || r.d0_rule != rule || r.snr != snr) continue;
            if (r.failed) {
              ++c.failures;
              continue;
            }
            if (metric == "hit_rate") {
              xs.push_back(r.recovery.hit_rate);
            } else if (metric == "precision") {
              xs.push_back(r.recovery.precision);
            } else {
              const Method m = method_from_string(metric);
              xs.push_back(r.accuracy.at(m));
              if (r.fallback.at(m)) ++c.failures;
            }
          }
          c.trials = static_cast<int>(xs.size());
          if (!xs.empty()) {
            double sum = 0.0;
            for (double x : xs) sum += x;
            c.mean = sum / static_cast<double>(xs.size());
            if (xs.size() > 1) {
              double ss = 0.0;
              for (double x : xs) ss += (x - c.mean) * (x - c.mean);
              c.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
            }
          }
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

/// Runs every (p, d0 rule, snr, trial). Trials are spread over cfg.threads
/// workers; records come back in sweep order regardless.
inline BenchmarkResult run_benchmark(const BenchConfig& cfg,
                                     const std::function<void(const TrialRecord&)>& on_trial = {}) {
  cfg.validate();
  struct Job {
    int p;
    D0Rule rule;
    Snr snr;
    int trial;
  };
  std::vector<Job> jobs;
  for (int p : cfg.p_list) {
    for (D0Rule rule : cfg.d0_rules) {
      for (Snr snr : cfg.snrs) {
        for (int t = 0; t < cfg.trials; ++t) jobs.push_back({p, rule, snr, t});
      }
    }
  }
  BenchmarkResult res;
  res.trials.resize(jobs.size());
  if (cfg.threads == 1) {
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      res.trials[k] = run_trial(cfg, jobs[k].p, jobs[k].rule, jobs[k].snr, jobs[k].trial);
      if (on_trial) on_trial(res.trials[k]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k = next++; k < jobs.size(); k = next++) {
        res.trials[k] = run_trial(cfg, jobs[k].p, jobs[k].rule, jobs[k].snr, jobs[k].trial);
      }
    };
    std::vector<std::future<void>> pool;
    for (int w = 0; w < cfg.threads; ++w) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
    if (on_trial) {
      for (const auto& r : res.trials) on_trial(r);
    }
  }
  res.cells = aggregate(cfg, res.trials);
  return res;
}

inline void write_results_csv(std::ostream& out, const std::vector<CellSummary>& cells) {
  out << "p,d0,d0_rule,snr,metric,mean,sd,trials,failures\n";
  for (const auto& c : cells) {
    out << c.p << ',' << c.d0 << ',' << to_string(c.d0_rule) << ',' << to_string(c.snr) << ',' << c.metric << ','
        << io::detail::format_double(c.mean) << ',' << io::detail::format_double(c.sd) << ',' << c.trials << ','
        << c.failures << '\n';
  }
}

inline void write_trials_csv(std::ostream& out, const BenchConfig& cfg, const std::vector<TrialRecord>& trials) {
  const std::vector<Method> methods{Method::bayes, Method::amv, Method::sml, Method::ds, Method::mv};
  out << "p,d0,d0_rule,snr,trial,graph_seed,gibbs_seed,n,lambda,failed,hit_rate,precision,experts_found";
  for (Method m : methods) {
    if (cfg.runs(m)) out << ",acc_" << to_string(m);
  }
  out << ",em_lower_bound_drop,em_elbo_drop,ds_log_likelihood_drop,seconds_sample,seconds_neighborhoods,"
         "seconds_predict,flags,error\n";
  for (const auto& r : trials) {
    out << r.p << ',' << r.d0 << ',' << to_string(r.d0_rule) << ',' << to_string(r.snr) << ',' << r.trial << ','
        << r.graph_seed << ',' << r.gibbs_seed << ',' << r.n << ',' << io::detail::format_double(r.lambda) << ','
        << (r.failed ? 1 : 0) << ',' << io::detail::format_double(r.recovery.hit_rate) << ','
        << io::detail::format_double(r.recovery.precision) << ',' << r.experts_found;
    for (Method m : methods) {
      if (!cfg.runs(m)) continue;
      auto it = r.accuracy.find(m);
      out << ',' << (it == r.accuracy.end() ? std::string() : io::detail::format_double(it->second));
    }
    out << ',' << io::detail::format_double(r.em_lower_bound_drop) << ','
        << io::detail::format_double(r.em_elbo_drop) << ',' << io::detail::format_double(r.ds_log_likelihood_drop)
        << ',' << r.seconds_sample << ',' << r.seconds_neighborhoods << ',' << r.seconds_predict << ',';
    for (std::size_t k = 0; k < r.flags.size(); ++k) out << (k ? ";" : "") << r.flags[k];
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << ',' << err << '\n';
  }
}

/// Plain-text table: one row per (snr, p, d0), one column per metric.
inline void print_table(std::ostream& out, const BenchConfig& cfg, const std::vector<CellSummary>& cells) {
  const auto metrics = table_metrics(cfg);
  out << std::left << std::setw(8) << "snr" << std::setw(5) << "p" << std::setw(10) << "d0";
  for (const auto& m : metrics) out << std::setw(11) << m;
  out << "failures\n";
  for (Snr snr : cfg.snrs) {
    for (int p : cfg.p_list) {
      for (D0Rule rule : cfg.d0_rules) {
        std::ostringstream d0;
        d0 << d0_for(rule, p) << " (" << to_string(rule) << ")";
        out << std::setw(8) << to_string(snr) << std::setw(5) << p << std::setw(10) << d0.str();
        int failures = 0;
        for (const auto& m : metrics) {
          for (const auto& c : cells) {
            if (c.p == p && c.d0_rule == rule && c.snr == snr && c.metric == m) {
              std::ostringstream v;
              v << std::fixed << std::setprecision(3) << c.mean;
              out << std::setw(11) << v.str();
              failures = std::max(failures, c.failures);
            }
          }
        }
        out << failures << '\n';
      }
    }
  }
}

}  // namespace unelisa
