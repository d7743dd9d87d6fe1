#include "hypermp/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hypermp/error.hpp"
#include "json.hpp"

namespace hypermp {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t to_index(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  auto s = v.get<std::int64_t>();
  if (s < 0) throw ValidationError(where + ": negative id " + std::to_string(s));
  return static_cast<std::uint64_t>(s);
}

}  // namespace

FileFormat guess_format(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".txt" || ext == ".el" || ext == ".hyperedges") return FileFormat::kEdgeList;
  return FileFormat::kJson;
}

Dataset parse_json_dataset(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("malformed JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ParseError("top-level JSON value must be an object");
  if (!doc.contains("num_nodes")) throw ParseError("missing required key \"num_nodes\"");
  if (!doc.contains("hyperedges") || !doc["hyperedges"].is_array()) {
    throw ParseError("missing required array \"hyperedges\"");
  }
  auto n = to_index(doc["num_nodes"], "num_nodes");

  std::vector<std::vector<NodeId>> edges;
  edges.reserve(doc["hyperedges"].size());
  for (std::size_t e = 0; e < doc["hyperedges"].size(); ++e) {
    const auto& arr = doc["hyperedges"][e];
    auto where = "hyperedge " + std::to_string(e);
    if (!arr.is_array()) throw ParseError(where + ": expected an array");
    std::vector<NodeId> members;
    for (const auto& id : arr) {
      auto v = to_index(id, where);
      if (v >= n) {
        throw ValidationError(where + ": node id " + std::to_string(v) +
                              " out of range (num_nodes=" + std::to_string(n) + ")");
      }
      members.push_back(static_cast<NodeId>(v));
    }
    edges.push_back(std::move(members));
  }

  Dataset out{Hypergraph(n, std::move(edges)), std::nullopt, std::nullopt, std::nullopt};

  if (doc.contains("labels")) {
    LabelAssignment labels;
    for (std::size_t v = 0; v < doc["labels"].size(); ++v) {
      labels.labels.push_back(
          static_cast<ClassId>(to_index(doc["labels"][v], "label of node " + std::to_string(v))));
    }
    if (doc.contains("num_classes")) {
      labels.num_classes = to_index(doc["num_classes"], "num_classes");
    } else {
      ClassId max_label = 0;
      for (auto c : labels.labels) max_label = std::max(max_label, c);
      labels.num_classes = labels.labels.empty() ? 1 : max_label + 1;
    }
    labels.validate(n);
    out.labels = std::move(labels);
  }

  if (doc.contains("features")) {
    const auto& rows = doc["features"];
    if (!rows.is_array()) throw ParseError("\"features\" must be an array of arrays");
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    FeatureMatrix x(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != cols) {
        throw ParseError("features row " + std::to_string(i) + ": expected " +
                         std::to_string(cols) + " numbers");
      }
      for (std::size_t j = 0; j < cols; ++j) {
        if (!rows[i][j].is_number()) {
          throw ParseError("features row " + std::to_string(i) + ": non-numeric entry");
        }
        x(i, j) = rows[i][j].get<double>();
      }
    }
    x.validate(n);
    out.features = std::move(x);
  }
  return out;
}

std::string to_json_string(const Dataset& data) {
  json doc = json::object();
  doc["num_nodes"] = data.hypergraph.num_nodes();
  doc["hyperedges"] = data.hypergraph.edges();
  if (data.labels) {
    doc["labels"] = data.labels->labels;
    doc["num_classes"] = data.labels->num_classes;
  }
  if (data.features) {
    json rows = json::array();
    for (std::size_t i = 0; i < data.features->rows; ++i) {
      auto r = data.features->row(i);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    doc["features"] = std::move(rows);
  }
  return doc.dump() + "\n";
}

void save_json(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json_string(data);
  if (!out) throw Error("write failed: " + path.string());
}

Dataset parse_edge_list(std::istream& edges_in, std::istream* labels_in) {
  std::vector<std::vector<std::uint64_t>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(edges_in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream tokens(line);
    std::vector<std::uint64_t> ids;
    std::string tok;
    while (tokens >> tok) {
      std::size_t used = 0;
      unsigned long long id = 0;
      try {
        if (tok.front() == '-') throw std::invalid_argument(tok);
        id = std::stoull(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": invalid node id '" + tok + "'");
      }
      ids.push_back(id);
    }
    raw.push_back(std::move(ids));
  }

  std::optional<LabelAssignment> labels;
  if (labels_in) {
    LabelAssignment la;
    std::size_t label_line = 0;
    while (std::getline(*labels_in, line)) {
      ++label_line;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      try {
        std::size_t used = 0;
        long long c = std::stoll(line.substr(first), &used);
        if (c < 0) throw std::invalid_argument(line);
        la.labels.push_back(static_cast<ClassId>(c));
      } catch (const std::exception&) {
        throw ParseError("labels line " + std::to_string(label_line) + ": invalid label");
      }
    }
    ClassId max_label = 0;
    for (auto c : la.labels) max_label = std::max(max_label, c);
    la.num_classes = la.labels.empty() ? 1 : max_label + 1;
    labels = std::move(la);
  }

  std::uint64_t max_id = 0;
  std::map<std::uint64_t, NodeId> seen;
  for (const auto& ids : raw) {
    for (auto id : ids) {
      max_id = std::max(max_id, id);
      seen.emplace(id, 0);
    }
  }

  Dataset out;
  std::size_t n = 0;
  bool dense = seen.empty() || seen.size() == max_id + 1;
  if (labels) {
    // The labels file fixes the node count; ids must already be dense.
    n = labels->labels.size();
  } else if (dense) {
    n = seen.empty() ? 0 : max_id + 1;
  } else {
    std::vector<std::uint64_t> original;
    original.reserve(seen.size());
    for (auto& [id, dense_id] : seen) {
      dense_id = static_cast<NodeId>(original.size());
      original.push_back(id);
    }
    n = original.size();
    out.node_ids = std::move(original);
  }

  std::vector<std::vector<NodeId>> edges;
  edges.reserve(raw.size());
  for (std::size_t e = 0; e < raw.size(); ++e) {
    std::vector<NodeId> members;
    for (auto id : raw[e]) {
      if (out.node_ids) {
        members.push_back(seen.at(id));
      } else {
        if (id >= n) {
          throw ValidationError("hyperedge " + std::to_string(e) + ": node id " +
                                std::to_string(id) + " out of range (num_nodes=" +
                                std::to_string(n) + ")");
        }
        members.push_back(static_cast<NodeId>(id));
      }
    }
    edges.push_back(std::move(members));
  }
  out.hypergraph = Hypergraph(n, std::move(edges));
  if (labels) {
    labels->validate(n);
    out.labels = std::move(labels);
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, FileFormat format) {
  if (format == FileFormat::kJson) return parse_json_dataset(read_file(path));

  std::ifstream edges(path);
  if (!edges) throw ParseError("cannot open " + path.string());
  auto labels_path = path;
  labels_path.replace_extension(".labels");
  std::ifstream labels(labels_path);
  return parse_edge_list(edges, labels ? &labels : nullptr);
}

Dataset load_dataset(const std::filesystem::path& path) {
  return load_dataset(path, guess_format(path));
}

}  // namespace hypermp
