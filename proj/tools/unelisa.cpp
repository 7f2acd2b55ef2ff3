// Command-line front end.
//
//   unelisa simulate   generate or load a graph, Gibbs-sample labels and truth
//   unelisa approx     write the node-0-free approximating graph
//   unelisa prune      nodewise neighborhoods and the pruned expert set
//   unelisa predict    Bayes / AMV / MV / DS / SML predictions
//   unelisa evaluate   classification (and optionally recovery) metrics
//   unelisa benchmark  synthetic sweep, results.csv and trials.csv
//
// Exit codes: 0 success, 1 usage, 2 data or format, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "unelisa/unelisa.hpp"

namespace fs = std::filesystem;
using namespace unelisa;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out = ".";
};

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

struct SimulateArgs {
  std::string graph;
  int p = 25;
  int d0 = 5;
  std::string snr = "high";
  int n = 1000;
  int burn_in = 1000;
  int thin = 0;
  int chains = 1;
};

void cmd_simulate(const Globals& g, const SimulateArgs& a) {
  IsingModelSpec spec;
  if (!a.graph.empty()) {
    spec = io::read_graph_tsv(a.graph);
  } else {
    spec = generate_graph(a.p, a.d0, snr_from_string(a.snr), derive_seed(g.seed, {0}));
  }
  GibbsConfig gc;
  gc.burn_in_sweeps = a.burn_in;
  if (a.thin > 0) gc.thin_site_updates = a.thin;
  gc.n_samples = a.n;
  gc.chains = a.chains;
  gc.seed = derive_seed(g.seed, {1});
  const auto labels = sample(spec, gc);
  io::write_graph_tsv(out_path(g, "graph.tsv"), spec);
  io::write_labels_csv(out_path(g, "labels.csv"), labels);
  io::write_truth_csv(out_path(g, "truth.csv"), labels);
  const auto violations = validate_model(spec);
  for (const auto& v : violations) std::cerr << "warning: " << v.property << ": " << v.message << '\n';
  std::cout << "wrote " << labels.n() << " x " << labels.p() << " labels to " << g.out << '\n';
}

void cmd_approx(const Globals& g, const std::string& graph) {
  const auto spec = io::read_graph_tsv(graph);
  const auto approx = approximate(spec);
  io::write_graph_tsv(out_path(g, "approx.tsv"), approx.to_spec());
  const auto nb = approx.neighborhoods();
  for (NodeId s = 1; s <= nb.p; ++s) {
    std::cout << s << ':';
    for (NodeId t : nb.of(s)) std::cout << ' ' << t;
    std::cout << '\n';
  }
}

struct PruneArgs {
  std::string labels;
  std::string lambda = "auto";
  std::string symmetrize = "or";
  SolverOptions solver;
};

io::ReportDocument build_report(const LabelMatrix& labels, double lambda, Symmetrize rule, const SolverOptions& solver,
                                NeighborhoodMap& nbhd) {
  nbhd = neighborhoods(labels, lambda, rule, solver);
  const auto pruned = reconstruct_n0(nbhd);
  io::ReportDocument doc;
  doc.report = pruned.report;
  doc.knots = pruned.table;
  for (NodeId s = 1; s <= nbhd.p; ++s) doc.neighborhood_sizes[s] = nbhd.size_of(s);
  const std::vector<NodeId> experts(doc.report.expert_set_hat.begin(), doc.report.expert_set_hat.end());
  const auto signs = expert_sign_matrix(nbhd, experts);
  for (std::size_t a = 0; a < experts.size(); ++a) {
    for (std::size_t b = a + 1; b < experts.size(); ++b) doc.expert_signs[make_edge(experts[a], experts[b])] = signs[a][b];
  }
  doc.parameters = {{"lambda", lambda},
                    {"symmetrize", rule == Symmetrize::or_rule ? "or" : "and"},
                    {"n", labels.n()},
                    {"p", labels.p()}};
  if (pruned.no_knots) doc.flags.push_back("no_knots");
  if (doc.report.empty_flag) doc.flags.push_back("empty_expert_set");
  return doc;
}

void cmd_prune(const Globals& g, const PruneArgs& a) {
  const auto labels = io::read_labels_csv(a.labels);
  double lambda = 0.0;
  if (a.lambda == "auto") {
    lambda = rule_lambda(LambdaRule::rate, labels.p(), labels.n());
  } else if (a.lambda == "logit") {
    lambda = rule_lambda(LambdaRule::logit, labels.p(), labels.n());
  } else {
    lambda = io::detail::parse_double(a.lambda, 0);
  }
  if (!(lambda >= 0.0)) throw StructuralError("--lambda must be nonnegative");
  NeighborhoodMap nbhd;
  const auto doc = build_report(labels, lambda, symmetrize_from_string(a.symmetrize), a.solver, nbhd);
  io::write_report(out_path(g, "report.json"), doc);
  std::cout << "experts:";
  for (NodeId s : doc.report.expert_set_hat) std::cout << ' ' << s;
  std::cout << '\n';
}

struct PredictArgs {
  std::string labels;
  std::string report;
  std::string method = "bayes";
};

void cmd_predict(const Globals& g, const PredictArgs& a) {
  const auto labels = io::read_labels_csv(a.labels);
  const Method method = method_from_string(a.method);
  PredictionResult pred;
  if (method == Method::mv) {
    pred = majority_vote(labels);
  } else if (method == Method::ds) {
    pred = dawid_skene(labels).prediction;
  } else if (method == Method::sml) {
    pred = sml(labels).prediction;
  } else {
    if (a.report.empty()) throw StructuralError("--experts is required for bayes and amv");
    auto doc = io::read_report(a.report);
    const std::vector<NodeId> experts(doc.report.expert_set_hat.begin(), doc.report.expert_set_hat.end());
    if (experts.empty()) {
      pred = majority_vote(labels);
      pred.method = method;
      pred.flags.push_back("empty_expert_set_fallback_mv");
    } else if (method == Method::bayes) {
      EmOptions opts;
      opts.init.seed = derive_seed(g.seed, {2});
      const auto fit = em_fit(labels, experts, opts);
      pred = bayes_classify(fit.report, labels);
      if (!fit.converged) pred.flags.push_back("em_not_converged");
      doc.report = fit.report;
      doc.has_bayes_fit = true;
      io::write_report(out_path(g, "report.json"), doc);
    } else {
      std::vector<std::vector<int>> signs(experts.size(), std::vector<int>(experts.size(), 0));
      for (std::size_t x = 0; x < experts.size(); ++x) {
        for (std::size_t y = x + 1; y < experts.size(); ++y) {
          auto it = doc.expert_signs.find(make_edge(experts[x], experts[y]));
          signs[x][y] = signs[y][x] = it == doc.expert_signs.end() ? 0 : it->second;
        }
      }
      pred = augmented_majority_vote(experts, signs, labels, doc.neighborhood_sizes);
    }
  }
  std::ofstream out(out_path(g, "predictions.csv"));
  io::write_predictions_csv(out, labels.instance_ids(), pred);
  for (const auto& f : pred.flags) std::cerr << "flag: " << f << '\n';
}

struct EvaluateArgs {
  std::string predictions;
  std::string truth;
  std::string report;
  std::string graph;
  std::optional<double> threshold;
};

void cmd_evaluate(const Globals& g, const EvaluateArgs& a) {
  const auto file = io::read_predictions_csv(a.predictions);
  const auto truth = io::align_truth(io::read_truth_csv(a.truth), file.ids);
  const auto m = classification(file.prediction, truth, a.threshold);
  auto flag = [](bool undefined) { return undefined ? std::string("undefined") : std::string(); };
  std::vector<io::MetricRow> rows{{"accuracy", m.accuracy, ""},
                                  {"auc", m.auc, flag(m.auc_undefined)},
                                  {"ppv", m.ppv, flag(m.ppv_undefined)},
                                  {"npv", m.npv, flag(m.npv_undefined)},
                                  {"f_score", m.f_score, flag(m.f_score_undefined)},
                                  {"f1", m.f1, flag(m.f1_undefined)}};
  if (!a.report.empty() && !a.graph.empty()) {
    const auto doc = io::read_report(a.report);
    const auto spec = io::read_graph_tsv(a.graph);
    const auto r = recovery(doc.report.expert_set_hat, spec.expert_set);
    rows.push_back({"hit_rate", r.hit_rate, ""});
    rows.push_back({"precision", r.precision, r.empty_estimate ? "empty_estimate" : ""});
  }
  std::ofstream out(out_path(g, "metrics.csv"));
  io::write_metrics_csv(out, rows);
  io::write_metrics_csv(std::cout, rows);
}

struct BenchmarkArgs {
  std::string config;
  int trials = 0;
  int threads = 0;
};

void cmd_benchmark(const Globals& g, const BenchmarkArgs& a, bool seed_given, bool out_given) {
  BenchConfig cfg = a.config.empty() ? BenchConfig{} : parse_config_file(a.config);
  if (a.trials > 0) cfg.trials = a.trials;
  if (a.threads > 0) cfg.threads = a.threads;
  if (seed_given) cfg.seed = g.seed;
  if (out_given || cfg.out_dir.empty()) cfg.out_dir = g.out;
  const auto res = run_benchmark(cfg, [](const TrialRecord& r) {
    std::cerr << "p=" << r.p << " d0=" << r.d0 << " snr=" << to_string(r.snr) << " trial=" << r.trial
              << (r.failed ? " FAILED: " + r.error : "") << '\n';
  });
  fs::create_directories(cfg.out_dir);
  std::ofstream results(fs::path(cfg.out_dir) / "results.csv");
  write_results_csv(results, res.cells);
  std::ofstream trials(fs::path(cfg.out_dir) / "trials.csv");
  write_trials_csv(trials, cfg, res.trials);
  print_table(std::cout, cfg, res.cells);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised ensemble learning via Ising model approximation"};
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  auto* out_opt = app.add_option("--out", g.out, "Output directory")->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample labels and truth from a graph");
  simulate->add_option("--graph", sim.graph, "Graph TSV; when omitted a random graph is generated");
  simulate->add_option("--p", sim.p, "Number of classifiers for a generated graph")->capture_default_str();
  simulate->add_option("--d0", sim.d0, "Number of experts for a generated graph")->capture_default_str();
  simulate->add_option("--snr", sim.snr, "high, medium or low")->capture_default_str();
  simulate->add_option("--n", sim.n, "Number of instances")->capture_default_str();
  simulate->add_option("--burn-in", sim.burn_in, "Burn-in sweeps")->capture_default_str();
  simulate->add_option("--thin", sim.thin, "Site updates between samples (default 2 x nodes)");
  simulate->add_option("--chains", sim.chains, "Independent chains")->capture_default_str();

  std::string approx_graph;
  auto* approx = app.add_subcommand("approx", "Marginalize node 0 out of a graph");
  approx->add_option("--graph", approx_graph, "Graph TSV")->required();

  PruneArgs pr;
  auto* prune = app.add_subcommand("prune", "Estimate neighborhoods and the expert set");
  prune->add_option("--labels", pr.labels, "Labels CSV")->required();
  prune->add_option("--lambda", pr.lambda, "auto (sqrt(log p / n)), logit (twice that) or a value")->capture_default_str();
  prune->add_option("--rule,--symmetrize", pr.symmetrize, "or or and")->capture_default_str();
  prune->add_option("--tol", pr.solver.tol, "KKT tolerance of each regression")->capture_default_str();
  prune->add_option("--max-iter", pr.solver.max_iter, "Coordinate sweeps per regression")->capture_default_str()->check(CLI::PositiveNumber);

  PredictArgs pa;
  auto* predict = app.add_subcommand("predict", "Predict labels");
  predict->add_option("--labels", pa.labels, "Labels CSV")->required();
  predict->add_option("--experts,--report", pa.report, "Expert report JSON from prune");
  predict->add_option("--method", pa.method, "bayes, amv, mv, ds or sml")
      ->check(CLI::IsMember({"bayes", "amv", "mv", "ds", "sml"}))
      ->capture_default_str();

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against truth");
  evaluate->add_option("--pred,--predictions", ea.predictions, "Predictions CSV")->required();
  evaluate->add_option("--truth", ea.truth, "Truth CSV")->required();
  evaluate->add_option("--report", ea.report, "Expert report JSON (with --graph: recovery metrics)");
  evaluate->add_option("--graph", ea.graph, "True graph TSV");
  evaluate->add_option("--threshold", ea.threshold, "Derive hard labels as score >= threshold");

  BenchmarkArgs ba;
  auto* benchmark = app.add_subcommand("benchmark", "Run the synthetic sweep");
  benchmark->add_option("--config", ba.config, "key = value config file");
  benchmark->add_option("--trials", ba.trials, "Override the trial count");
  benchmark->add_option("--threads", ba.threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*simulate) cmd_simulate(g, sim);
    if (*approx) cmd_approx(g, approx_graph);
    if (*prune) cmd_prune(g, pr);
    if (*predict) cmd_predict(g, pa);
    if (*evaluate) cmd_evaluate(g, ea);
    if (*benchmark) cmd_benchmark(g, ba, seed_opt->count() > 0, out_opt->count() > 0);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
