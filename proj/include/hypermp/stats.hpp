#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "hypermp/hypergraph.hpp"

namespace hypermp {

/// Dataset statistics (sizes, degrees, isolated nodes, incidence count).
/// Medians are lower medians.
struct StatsReport {
  std::size_t num_nodes = 0;
  std::size_t num_hyperedges = 0;
  std::optional<std::size_t> num_classes;

  std::size_t min_edge_size = 0;
  std::size_t median_edge_size = 0;
  std::size_t max_edge_size = 0;

  std::size_t min_degree = 0;
  std::size_t median_degree = 0;
  double mean_degree = 0.0;
  std::size_t max_degree = 0;

  std::size_t isolated_node_count = 0;
  double isolated_node_fraction = 0.0;
  /// Node counts with degree 0, 1, 2, 3 and > 3.
  std::array<std::size_t, 5> degree_histogram{};
  std::size_t sum_of_hyperedge_sizes = 0;
};

StatsReport compute_stats(const Hypergraph& h, const LabelAssignment* labels = nullptr);

}  // namespace hypermp
