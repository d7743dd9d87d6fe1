#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypermp/hypergraph.hpp"

namespace hypermp {

enum class FileFormat { kJson, kEdgeList };

/// Everything a dataset file may carry.
struct Dataset {
  Hypergraph hypergraph;
  std::optional<LabelAssignment> labels;
  std::optional<FeatureMatrix> features;
  /// Present only when an edge-list file used sparse ids: node_ids[i] is the
  /// original id that was remapped to dense id i.
  std::optional<std::vector<std::uint64_t>> node_ids;
};

/// Picks kEdgeList for .txt/.hyperedges/.el files, kJson otherwise.
FileFormat guess_format(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, FileFormat format);
Dataset load_dataset(const std::filesystem::path& path);

/// Canonical JSON: {"num_nodes", "hyperedges", ["labels", "num_classes"], ["features"]}.
Dataset parse_json_dataset(const std::string& text);
std::string to_json_string(const Dataset& data);
void save_json(const std::filesystem::path& path, const Dataset& data);

/// One hyperedge per line, whitespace-separated ids, '#' comment lines.
/// `labels_text`, when given, holds one integer label per line and fixes
/// num_nodes to its line count.
Dataset parse_edge_list(std::istream& edges, std::istream* labels_text);

}  // namespace hypermp
