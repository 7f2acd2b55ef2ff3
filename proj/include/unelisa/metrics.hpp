#pragma once

// Support-recovery and classification metrics. Undefined quantities are
// reported as 0 together with a flag, never as NaN.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "unelisa/core.hpp"

namespace unelisa {

struct RecoveryMetrics {
  double hit_rate = 0.0;
  double precision = 0.0;
  bool empty_estimate = false;
};

inline RecoveryMetrics recovery(const NodeSet& estimated, const NodeSet& truth) {
  if (truth.empty()) throw StructuralError("recovery: true expert set is empty");
  std::size_t common = 0;
  for (NodeId s : estimated) common += truth.count(s);
  RecoveryMetrics m;
  m.hit_rate = static_cast<double>(common) / static_cast<double>(truth.size());
  if (estimated.empty()) {
    m.empty_estimate = true;
    m.precision = 0.0;
  } else {
    m.precision = static_cast<double>(common) / static_cast<double>(estimated.size());
  }
  return m;
}

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct ClassificationMetrics {
  double accuracy = 0.0;
  double auc = 0.0;
  double ppv = 0.0;
  double npv = 0.0;
  double f_score = 0.0;  // 2 PPV NPV / (PPV + NPV)
  double f1 = 0.0;       // conventional 2 PPV recall / (PPV + recall)
  ConfusionCounts counts;
  bool auc_undefined = false;
  bool ppv_undefined = false;
  bool npv_undefined = false;
  bool f_score_undefined = false;
  bool f1_undefined = false;
};

/// Mann-Whitney AUC: the probability that a positive outranks a negative,
/// ties counting 1/2. Average ranks handle ties in O(n log n).
inline double auc_rank(const std::vector<double>& scores, const std::vector<int>& truth, bool* undefined = nullptr) {
  if (scores.size() != truth.size()) throw StructuralError("auc: score and truth lengths differ");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double pos = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (truth[i] == 1) {
      pos += 1.0;
      rank_sum += rank[i];
    }
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) {
    if (undefined) *undefined = true;
    return 0.0;
  }
  if (undefined) *undefined = false;
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

/// Hard labels are pred.labels unless a threshold is given, in which case
/// label_i = +1 iff score_i >= threshold.
inline ClassificationMetrics classification(const PredictionResult& pred, const std::vector<int>& truth,
                                            std::optional<double> threshold = std::nullopt) {
  if (pred.labels.size() != truth.size() || pred.scores.size() != truth.size()) {
    throw StructuralError("classification: prediction and truth lengths differ");
  }
  ClassificationMetrics m;
  auto& c = m.counts;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pp = threshold ? pred.scores[i] >= *threshold : pred.labels[i] == 1;
    const bool tp = truth[i] == 1;
    if (pp && tp) ++c.tp;
    if (pp && !tp) ++c.fp;
    if (!pp && !tp) ++c.tn;
    if (!pp && tp) ++c.fn;
  }
  const double n = static_cast<double>(truth.size());
  m.accuracy = n > 0 ? static_cast<double>(c.tp + c.tn) / n : 0.0;
  if (c.tp + c.fp == 0) {
    m.ppv_undefined = true;
  } else {
    m.ppv = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tn + c.fn == 0) {
    m.npv_undefined = true;
  } else {
    m.npv = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fn);
  }
  if (m.ppv + m.npv > 0.0) {
    m.f_score = 2.0 * m.ppv * m.npv / (m.ppv + m.npv);
  } else {
    m.f_score_undefined = true;
  }
  const double recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  if (m.ppv + recall > 0.0) {
    m.f1 = 2.0 * m.ppv * recall / (m.ppv + recall);
  } else {
    m.f1_undefined = true;
  }
  m.auc = auc_rank(pred.scores, truth, &m.auc_undefined);
  return m;
}

inline double accuracy(const std::vector<int>& labels, const std::vector<int>& truth) {
  if (labels.size() != truth.size()) throw StructuralError("accuracy: lengths differ");
  if (labels.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += labels[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

}  // namespace unelisa
