#include "hypermp/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "hypermp/error.hpp"

namespace hypermp {

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string str(std::size_t v) { return std::to_string(v); }

Json nullable(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

Json nullable_array(const std::vector<double>& values) {
  Json arr = Json::array();
  for (double v : values) arr.push_back(nullable(v));
  return arr;
}

const char* policy_name(IsolatedPolicy p) {
  return p == IsolatedPolicy::kCountAsStable ? "count-as-stable" : "exclude";
}

}  // namespace

std::string emit_json(const Json& value) { return value.dump(2) + "\n"; }

std::string emit_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(cells[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

std::string emit(const Report& report, ReportFormat format) {
  return format == ReportFormat::kJson ? emit_json(report.json) : emit_csv(report.table);
}

void write_output(const std::string& bytes, const std::optional<std::filesystem::path>& path) {
  if (!path || path->empty()) {
    std::cout << bytes;
    std::cout.flush();
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw Error("cannot write output file " + path->string());
  out << bytes;
  if (!out) throw Error("write failed: " + path->string());
}

std::vector<double> default_mu_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 100; ++k) grid.push_back(k / 100.0);
  return grid;
}

Report stats_report(const StatsReport& s) {
  Report r;
  auto& j = r.json;
  j["num_nodes"] = s.num_nodes;
  j["num_hyperedges"] = s.num_hyperedges;
  j["num_classes"] = s.num_classes ? Json(*s.num_classes) : Json(nullptr);
  j["min_hyperedge_size"] = s.min_edge_size;
  j["median_hyperedge_size"] = s.median_edge_size;
  j["max_hyperedge_size"] = s.max_edge_size;
  j["min_degree"] = s.min_degree;
  j["median_degree"] = s.median_degree;
  j["mean_degree"] = s.mean_degree;
  j["max_degree"] = s.max_degree;
  j["isolated_node_count"] = s.isolated_node_count;
  j["isolated_node_fraction"] = s.isolated_node_fraction;
  j["degree_histogram"] = {{"0", s.degree_histogram[0]},
                           {"1", s.degree_histogram[1]},
                           {"2", s.degree_histogram[2]},
                           {"3", s.degree_histogram[3]},
                           {">3", s.degree_histogram[4]}};
  j["sum_of_hyperedge_sizes"] = s.sum_of_hyperedge_sizes;

  r.table.header = {"field", "value"};
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      for (const auto& [bucket, count] : value.items()) {
        r.table.rows.push_back({key + "[" + bucket + "]", count.dump()});
      }
    } else if (value.is_number_float()) {
      r.table.rows.push_back({key, format_number(value.get<double>())});
    } else {
      r.table.rows.push_back({key, value.is_null() ? "" : value.dump()});
    }
  }
  return r;
}

Report delta_report(const HomophilyTrace<double>& trace, std::size_t t,
                    const std::vector<double>& mu_grid, IsolatedPolicy policy) {
  Report r;
  Json rows = Json::array();
  r.table.header = {"t", "mu", "delta"};
  for (double mu : mu_grid) {
    auto d = delta_homophily(trace, t, mu, policy);
    rows.push_back({{"mu", mu}, {"value", d.value}});
    r.table.rows.push_back({str(t), format_number(mu), format_number(d.value)});
  }
  r.json["t"] = t;
  r.json["isolated_policy"] = policy_name(policy);
  r.json["delta"] = std::move(rows);
  return r;
}

Report homophily_report(const HomophilyTrace<double>& trace, const LabelAssignment& labels,
                        const std::vector<double>& mu_grid, IsolatedPolicy policy) {
  Report r;
  r.json["levels"] = trace.levels;
  r.json["num_nodes"] = trace.num_nodes();
  Json per_level = Json::array();
  for (std::size_t t = 0; t <= trace.levels; ++t) {
    const auto& scores = trace.node_scores[t];
    Json node_scores = Json::array();
    for (std::size_t v = 0; v < scores.size(); ++v) {
      node_scores.push_back(trace.defined[v] ? Json(scores[v]) : Json(nullptr));
    }
    per_level.push_back({{"t", t},
                         {"mean", mean_defined(scores, trace.defined)},
                         {"class_means", nullable_array(per_class_mean(scores, trace.defined, labels))},
                         {"node_scores", std::move(node_scores)}});
  }
  r.json["node_homophily"] = std::move(per_level);
  Json deltas = Json::array();
  for (std::size_t t = 1; t <= trace.levels; ++t) {
    Json grid = Json::array();
    for (double mu : mu_grid) {
      grid.push_back({{"mu", mu}, {"value", delta_homophily(trace, t, mu, policy).value}});
    }
    deltas.push_back({{"t", t}, {"grid", std::move(grid)}});
  }
  r.json["isolated_policy"] = policy_name(policy);
  r.json["delta"] = std::move(deltas);

  r.table.header = {"node", "level", "label", "score"};
  for (std::size_t v = 0; v < trace.num_nodes(); ++v) {
    for (std::size_t t = 0; t <= trace.levels; ++t) {
      r.table.rows.push_back({str(v), str(t), str(labels[static_cast<NodeId>(v)]),
                              trace.defined[v] ? format_number(trace.node_scores[t][v]) : ""});
    }
  }
  return r;
}

Report kuniform_report(const KUniformReport& k) {
  Report r;
  r.json["k"] = k.k;
  r.json["num_size_k_edges"] = k.num_size_k_edges;
  Json classes = Json::array();
  r.table.header = {"class", "t", "affinity", "baseline", "ratio", "normalized_bias"};
  for (std::size_t c = 0; c < k.classes.size(); ++c) {
    const auto& s = k.classes[c];
    classes.push_back({{"class", c},
                       {"participates", s.participates},
                       {"class_size", s.class_size},
                       {"affinity", nullable_array(s.affinity)},
                       {"baseline", nullable_array(s.baseline)},
                       {"ratio", nullable_array(s.ratio)},
                       {"normalized_bias", nullable_array(s.normalized_bias)}});
    for (std::size_t t = 1; t <= k.k; ++t) {
      r.table.rows.push_back({str(c), str(t), format_number(s.affinity[t - 1]),
                              format_number(s.baseline[t - 1]), format_number(s.ratio[t - 1]),
                              format_number(s.normalized_bias[t - 1])});
    }
  }
  r.json["classes"] = std::move(classes);
  return r;
}

Report class_shift_report(const ClassShiftReport& s) {
  Report r;
  r.json["original"] = s.original;
  r.json["step1"] = s.step1;
  r.json["step12"] = s.step12;
  r.json["tv_step1"] = s.tv_step1;
  r.json["tv_step12"] = s.tv_step12;
  r.table.header = {"class", "original", "step1", "step12"};
  for (std::size_t c = 0; c < s.original.size(); ++c) {
    r.table.rows.push_back({str(c), format_number(s.original[c]), format_number(s.step1[c]),
                            format_number(s.step12[c])});
  }
  return r;
}

Json train_report_json(const TrainReport& t) {
  Json j;
  j["best_val_accuracy"] = t.best_val_accuracy;
  j["test_accuracy"] = t.test_accuracy;
  j["train_accuracy"] = t.train_accuracy;
  j["best_epoch"] = t.best_epoch;
  j["loss_curve"] = t.loss_curve;
  j["train_accuracy_curve"] = t.train_accuracy_curve;
  j["val_accuracy_curve"] = t.val_accuracy_curve;
  return j;
}

}  // namespace hypermp
