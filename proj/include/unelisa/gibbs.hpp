#pragma once

// Gibbs sampler for pairwise binary fields.
//
// One site update draws y_i = +1 with probability sigma(2 h_i), where h_i is
// the node's field plus the weighted sum of its neighbors. The chain starts
// at all +1, runs `burn_in_sweeps` full sweeps, then records the whole state
// after every `thin_site_updates` further site updates. With several chains,
// chain c uses seed derive_seed(seed, {c}) and rows are concatenated in
// chain order.

#include <algorithm>
#include <cstdint>
#include <future>
#include <numeric>
#include <optional>
#include <vector>

#include "unelisa/core.hpp"
#include "unelisa/pairwise.hpp"
#include "unelisa/rng.hpp"

namespace unelisa {

enum class UpdateOrder { fixed, random_permutation };

struct GibbsConfig {
  int burn_in_sweeps = 1000;
  std::optional<int> thin_site_updates;  // default: 2 * (number of nodes)
  int n_samples = 1000;
  std::uint64_t seed = 0;
  UpdateOrder update_order = UpdateOrder::fixed;
  int chains = 1;

  void validate() const {
    if (burn_in_sweeps < 0) throw StructuralError("GibbsConfig: burn_in_sweeps must be >= 0");
    if (thin_site_updates && *thin_site_updates < 1) throw StructuralError("GibbsConfig: thin_site_updates must be >= 1");
    if (n_samples < 1) throw StructuralError("GibbsConfig: n_samples must be >= 1");
    if (chains < 1) throw StructuralError("GibbsConfig: chains must be >= 1");
  }
};

/// Returns n_samples states, each a vector of spins indexed by local node.
inline std::vector<std::vector<int>> run_chain(const PairwiseIsing& model, int burn_in_sweeps, int thin,
                                               int n_samples, std::uint64_t seed, UpdateOrder order) {
  Rng rng(seed);
  const int k = model.num_nodes;
  std::vector<int> y(static_cast<std::size_t>(k), 1);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);

  auto reshuffle = [&] {
    if (order != UpdateOrder::random_permutation) return;
    for (int i = k - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
  };
  auto update = [&](int i) {
    const double prob = prob_from_half_logit(model.local_field(i, y));
    y[static_cast<std::size_t>(i)] = rng.uniform01() < prob ? 1 : -1;
  };

  for (int sweep = 0; sweep < burn_in_sweeps; ++sweep) {
    reshuffle();
    for (int i : perm) update(i);
  }

  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  long long since_record = 0;
  while (static_cast<int>(out.size()) < n_samples) {
    reshuffle();
    for (int i : perm) {
      update(i);
      if (++since_record == thin) {
        out.push_back(y);
        since_record = 0;
        if (static_cast<int>(out.size()) == n_samples) break;
      }
    }
  }
  return out;
}

inline std::vector<std::vector<int>> sample_states(const PairwiseIsing& model, const GibbsConfig& cfg) {
  cfg.validate();
  const int thin = cfg.thin_site_updates.value_or(2 * model.num_nodes);
  if (cfg.chains == 1) return run_chain(model, cfg.burn_in_sweeps, thin, cfg.n_samples, cfg.seed, cfg.update_order);

  std::vector<std::future<std::vector<std::vector<int>>>> jobs;
  for (int c = 0; c < cfg.chains; ++c) {
    const int share = cfg.n_samples / cfg.chains + (c < cfg.n_samples % cfg.chains ? 1 : 0);
    if (share == 0) continue;
    const std::uint64_t seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(c)});
    jobs.push_back(std::async(std::launch::async, run_chain, std::cref(model), cfg.burn_in_sweeps, thin, share, seed,
                              cfg.update_order));
  }
  std::vector<std::vector<int>> out;
  for (auto& j : jobs) {
    auto part = j.get();
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

/// Samples (f_0, ..., f_p); columns 1..p become the label matrix and f_0 the
/// truth column.
inline LabelMatrix sample(const IsingModelSpec& spec, const GibbsConfig& cfg) {
  check_structure(spec);
  if (spec.p < 2) throw StructuralError("sample: need at least two observed classifiers");
  const auto states = sample_states(PairwiseIsing::from_spec(spec), cfg);
  const std::size_t n = states.size();
  const auto p = static_cast<std::size_t>(spec.p);
  std::vector<int> values(n * p);
  std::vector<int> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = states[i][0];
    std::copy(states[i].begin() + 1, states[i].end(), values.begin() + static_cast<std::ptrdiff_t>(i * p));
  }
  return LabelMatrix(n, p, std::move(values), {}, {}, std::move(truth));
}

/// Samples a node-0-free model over 1..p (e.g. an ApproxModel) into a label
/// matrix without truth.
inline LabelMatrix sample_observed(const PairwiseIsing& model, const GibbsConfig& cfg) {
  if (model.first_node != 1) throw StructuralError("sample_observed: model must cover nodes 1..p");
  const auto states = sample_states(model, cfg);
  const std::size_t n = states.size();
  const auto p = static_cast<std::size_t>(model.num_nodes);
  std::vector<int> values;
  values.reserve(n * p);
  for (const auto& y : states) values.insert(values.end(), y.begin(), y.end());
  return LabelMatrix(n, p, std::move(values));
}

}  // namespace unelisa
