#pragma once

// File formats.
//
//   labels CSV       id,<classifier_id>,...   entries -1 / 1
//   truth CSV        id,f0
//   graph TSV        s<TAB>t<TAB>theta per edge; "0<TAB>0<TAB>theta0" carries
//                    the external field; "# p<TAB><p>" optionally pins the
//                    classifier count so trailing isolated nodes survive
//   predictions CSV  id,pred,score
//   metrics CSV      metric,value,flag
//   expert report    JSON document (see report_to_json)

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "unelisa/core.hpp"
#include "unelisa/prune.hpp"

namespace unelisa::io {

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline int parse_vote(const std::string& raw, std::size_t line_no) {
  const std::string s = trim(raw);
  if (s == "1" || s == "+1") return 1;
  if (s == "-1") return -1;
  throw FormatError("line " + std::to_string(line_no) + ": expected -1 or 1, got '" + s + "'");
}

inline double parse_double(const std::string& raw, std::size_t line_no) {
  const std::string s = trim(raw);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": expected a number, got '" + s + "'");
  }
}

inline int parse_int(const std::string& raw, std::size_t line_no) {
  const std::string s = trim(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": expected an integer, got '" + s + "'");
  }
  return v;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Labels and truth
// ---------------------------------------------------------------------------

inline LabelMatrix read_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("labels CSV is empty");
  auto header = detail::split(line, ',');
  if (header.size() < 3 || detail::trim(header[0]) != "id") {
    throw FormatError("labels CSV header must be 'id,<classifier_id>,...' with at least two classifiers");
  }
  std::vector<std::string> cls;
  for (std::size_t j = 1; j < header.size(); ++j) cls.push_back(detail::trim(header[j]));
  std::vector<std::string> ids;
  std::vector<int> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split(line, ',');
    if (cells.size() != header.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(cells.size()));
    }
    ids.push_back(detail::trim(cells[0]));
    for (std::size_t j = 1; j < cells.size(); ++j) values.push_back(detail::parse_vote(cells[j], line_no));
  }
  if (ids.empty()) throw FormatError("labels CSV has no rows");
  const std::size_t n = ids.size();
  const std::size_t p = cls.size();
  try {
    return LabelMatrix(n, p, std::move(values), std::move(cls), std::move(ids));
  } catch (const StructuralError& e) {
    throw FormatError(e.what());
  }
}

inline LabelMatrix read_labels_csv(const std::string& path) {
  auto in = detail::open_in(path);
  return read_labels_csv(in);
}

inline void write_labels_csv(std::ostream& out, const LabelMatrix& labels) {
  out << "id";
  for (const auto& c : labels.classifier_ids()) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < labels.n(); ++i) {
    out << labels.instance_ids()[i];
    for (std::size_t j = 0; j < labels.p(); ++j) out << ',' << labels(i, j);
    out << '\n';
  }
}

inline void write_labels_csv(const std::string& path, const LabelMatrix& labels) {
  auto out = detail::open_out(path);
  write_labels_csv(out, labels);
}

/// Reads `id,f0` rows in file order.
inline std::vector<std::pair<std::string, int>> read_truth_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("truth CSV is empty");
  auto header = detail::split(line, ',');
  if (header.size() != 2 || detail::trim(header[0]) != "id") throw FormatError("truth CSV header must be 'id,f0'");
  std::vector<std::pair<std::string, int>> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split(line, ',');
    if (cells.size() != 2) throw FormatError("line " + std::to_string(line_no) + ": expected 2 fields");
    out.emplace_back(detail::trim(cells[0]), detail::parse_vote(cells[1], line_no));
  }
  return out;
}

inline std::vector<std::pair<std::string, int>> read_truth_csv(const std::string& path) {
  auto in = detail::open_in(path);
  return read_truth_csv(in);
}

/// Aligns truth rows to the given instance ids.
inline std::vector<int> align_truth(const std::vector<std::pair<std::string, int>>& rows,
                                    const std::vector<std::string>& ids) {
  std::map<std::string, int> by_id;
  for (const auto& [id, v] : rows) {
    if (!by_id.emplace(id, v).second) throw FormatError("duplicate id '" + id + "' in truth CSV");
  }
  std::vector<int> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw FormatError("no truth for instance '" + id + "'");
    out.push_back(it->second);
  }
  return out;
}

inline void write_truth_csv(std::ostream& out, const std::vector<std::string>& ids, const std::vector<int>& truth) {
  out << "id,f0\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << truth[i] << '\n';
}

inline void write_truth_csv(const std::string& path, const LabelMatrix& labels) {
  if (!labels.has_truth()) throw StructuralError("write_truth_csv: label matrix carries no truth");
  auto out = detail::open_out(path);
  write_truth_csv(out, labels.instance_ids(), *labels.truth());
}

// ---------------------------------------------------------------------------
// Graph TSV
// ---------------------------------------------------------------------------

inline IsingModelSpec read_graph_tsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int declared_p = 0;
  int max_node = 0;
  double theta0 = 0.0;
  std::map<Edge, double> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      auto cells = detail::split(detail::trim(t.substr(1)), '\t');
      if (cells.size() == 2 && detail::trim(cells[0]) == "p") declared_p = detail::parse_int(cells[1], line_no);
      continue;
    }
    auto cells = detail::split(t, '\t');
    if (cells.size() != 3) throw FormatError("line " + std::to_string(line_no) + ": expected s<TAB>t<TAB>theta");
    const int s = detail::parse_int(cells[0], line_no);
    const int u = detail::parse_int(cells[1], line_no);
    const double w = detail::parse_double(cells[2], line_no);
    if (s < 0 || u < 0) throw FormatError("line " + std::to_string(line_no) + ": negative node id");
    if (s == 0 && u == 0) {
      theta0 = w;
      continue;
    }
    if (s == u) throw FormatError("line " + std::to_string(line_no) + ": self-edge");
    if (w == 0.0) throw FormatError("line " + std::to_string(line_no) + ": zero edge weight");
    if (!edges.emplace(make_edge(s, u), w).second) {
      throw FormatError("line " + std::to_string(line_no) + ": duplicate edge");
    }
    max_node = std::max({max_node, s, u});
  }
  if (declared_p != 0 && declared_p < max_node) throw FormatError("declared p is smaller than the largest node id");
  const int p = std::max(declared_p, max_node);
  if (p < 1) throw FormatError("graph TSV has no observed nodes");
  return IsingModelSpec::from_edges(p, theta0, edges);
}

inline IsingModelSpec read_graph_tsv(const std::string& path) {
  auto in = detail::open_in(path);
  return read_graph_tsv(in);
}

inline void write_graph_tsv(std::ostream& out, const IsingModelSpec& spec) {
  out << "# p\t" << spec.p << '\n';
  out << "0\t0\t" << detail::format_double(spec.theta0) << '\n';
  for (const auto& [e, w] : spec.edges) out << e.first << '\t' << e.second << '\t' << detail::format_double(w) << '\n';
}

inline void write_graph_tsv(const std::string& path, const IsingModelSpec& spec) {
  auto out = detail::open_out(path);
  write_graph_tsv(out, spec);
}

// ---------------------------------------------------------------------------
// Predictions and metrics
// ---------------------------------------------------------------------------

inline void write_predictions_csv(std::ostream& out, const std::vector<std::string>& ids, const PredictionResult& pred) {
  if (ids.size() != pred.size()) throw StructuralError("write_predictions_csv: id count does not match predictions");
  out << "id,pred,score\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << ',' << pred.labels[i] << ',' << detail::format_double(pred.scores[i]) << '\n';
  }
}

struct PredictionFile {
  std::vector<std::string> ids;
  PredictionResult prediction;
};

inline PredictionFile read_predictions_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("predictions CSV is empty");
  auto header = detail::split(line, ',');
  if (header.size() != 3 || detail::trim(header[0]) != "id") throw FormatError("predictions header must be 'id,pred,score'");
  PredictionFile f;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split(line, ',');
    if (cells.size() != 3) throw FormatError("line " + std::to_string(line_no) + ": expected 3 fields");
    f.ids.push_back(detail::trim(cells[0]));
    f.prediction.labels.push_back(detail::parse_vote(cells[1], line_no));
    f.prediction.scores.push_back(detail::parse_double(cells[2], line_no));
  }
  return f;
}

inline PredictionFile read_predictions_csv(const std::string& path) {
  auto in = detail::open_in(path);
  return read_predictions_csv(in);
}

struct MetricRow {
  std::string metric;
  double value = 0.0;
  std::string flag;
};

inline void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "metric,value,flag\n";
  for (const auto& r : rows) out << r.metric << ',' << detail::format_double(r.value) << ',' << r.flag << '\n';
}

// ---------------------------------------------------------------------------
// Expert report
// ---------------------------------------------------------------------------

/// Everything `predict` needs besides the labels: the pruned expert set, the
/// knot table, expert-pair signs for the augmented vote, neighborhood sizes,
/// and any fitted Bayes parameters.
struct ReportDocument {
  ExpertReport report;
  KnotTable knots;
  std::map<Edge, int> expert_signs;
  std::map<NodeId, std::size_t> neighborhood_sizes;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> flags;
  bool has_bayes_fit = false;
};

inline nlohmann::json report_to_json(const ReportDocument& doc) {
  using nlohmann::json;
  json j;
  j["expert_set"] = std::vector<NodeId>(doc.report.expert_set_hat.begin(), doc.report.expert_set_hat.end());
  j["knot_table"] = json::array();
  for (const auto& k : doc.knots.knots) {
    j["knot_table"].push_back({{"node", k.node}, {"size", k.size}, {"rank", k.rank}, {"selected", k.selected}});
  }
  j["expert_signs"] = json::array();
  for (const auto& [e, sg] : doc.expert_signs) j["expert_signs"].push_back({e.first, e.second, sg});
  j["neighborhood_sizes"] = json::object();
  for (const auto& [s, sz] : doc.neighborhood_sizes) j["neighborhood_sizes"][std::to_string(s)] = sz;
  j["parameters"] = doc.parameters;
  j["flags"] = doc.flags;
  if (doc.has_bayes_fit) {
    json b;
    b["positive_group"] = std::vector<NodeId>(doc.report.positive_group.begin(), doc.report.positive_group.end());
    b["negative_group"] = std::vector<NodeId>(doc.report.negative_group.begin(), doc.report.negative_group.end());
    b["pi_hat"] = doc.report.pi_hat;
    b["theta0_hat"] = doc.report.theta0_hat;
    b["psi_hat"] = json::object();
    b["theta0s_hat"] = json::object();
    for (const auto& [s, v] : doc.report.psi_hat) b["psi_hat"][std::to_string(s)] = v;
    for (const auto& [s, v] : doc.report.theta0s_hat) b["theta0s_hat"][std::to_string(s)] = v;
    j["bayes"] = b;
  }
  return j;
}

inline ReportDocument report_from_json(const nlohmann::json& j) {
  ReportDocument doc;
  try {
    for (NodeId s : j.at("expert_set").get<std::vector<NodeId>>()) doc.report.expert_set_hat.insert(s);
    if (j.contains("knot_table")) {
      for (const auto& k : j.at("knot_table")) {
        doc.knots.knots.push_back({k.at("node").get<NodeId>(), k.at("size").get<std::size_t>(),
                                   k.at("rank").get<std::size_t>(), k.at("selected").get<bool>()});
      }
    }
    if (j.contains("expert_signs")) {
      for (const auto& e : j.at("expert_signs")) {
        doc.expert_signs[make_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>())] = e.at(2).get<int>();
      }
    }
    if (j.contains("neighborhood_sizes")) {
      for (const auto& [k, v] : j.at("neighborhood_sizes").items()) doc.neighborhood_sizes[std::stoi(k)] = v.get<std::size_t>();
    }
    if (j.contains("parameters")) doc.parameters = j.at("parameters");
    if (j.contains("flags")) doc.flags = j.at("flags").get<std::vector<std::string>>();
    if (j.contains("bayes")) {
      const auto& b = j.at("bayes");
      doc.has_bayes_fit = true;
      for (NodeId s : b.at("positive_group").get<std::vector<NodeId>>()) doc.report.positive_group.insert(s);
      for (NodeId s : b.at("negative_group").get<std::vector<NodeId>>()) doc.report.negative_group.insert(s);
      doc.report.pi_hat = b.at("pi_hat").get<double>();
      for (const auto& [k, v] : b.at("psi_hat").items()) doc.report.psi_hat[std::stoi(k)] = v.get<double>();
      doc.report.sync_thetas();
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("expert report: ") + e.what());
  }
  doc.report.empty_flag = doc.report.expert_set_hat.empty();
  return doc;
}

inline ReportDocument read_report(const std::string& path) {
  auto in = detail::open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("expert report '" + path + "': " + e.what());
  }
  return report_from_json(j);
}

inline void write_report(const std::string& path, const ReportDocument& doc) {
  auto out = detail::open_out(path);
  out << report_to_json(doc).dump(2) << '\n';
}

}  // namespace unelisa::io
