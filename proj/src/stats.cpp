#include "hypermp/stats.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

#include "hypermp/error.hpp"

namespace hypermp {

namespace {

std::size_t lower_median(std::vector<std::size_t> values) {
  if (values.empty()) return 0;
  auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

}  // namespace

StatsReport compute_stats(const Hypergraph& h, const LabelAssignment* labels) {
  StatsReport r;
  r.num_nodes = h.num_nodes();
  r.num_hyperedges = h.num_edges();
  if (labels) r.num_classes = labels->num_classes;

  std::vector<std::size_t> sizes;
  sizes.reserve(h.num_edges());
  for (const auto& e : h.edges()) {
    sizes.push_back(e.size());
    r.sum_of_hyperedge_sizes += e.size();
  }
  if (!sizes.empty()) {
    auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    r.min_edge_size = *lo;
    r.max_edge_size = *hi;
    r.median_edge_size = lower_median(sizes);
  }

  std::vector<std::size_t> degrees(h.num_nodes());
  std::size_t degree_sum = 0;
  for (NodeId v = 0; v < h.num_nodes(); ++v) {
    auto d = h.degree(v);
    degrees[v] = d;
    degree_sum += d;
    ++r.degree_histogram[std::min<std::size_t>(d, 4)];
  }
  if (!degrees.empty()) {
    auto [lo, hi] = std::minmax_element(degrees.begin(), degrees.end());
    r.min_degree = *lo;
    r.max_degree = *hi;
    r.median_degree = lower_median(degrees);
    r.mean_degree = static_cast<double>(degree_sum) / static_cast<double>(degrees.size());
  }
  r.isolated_node_count = r.degree_histogram[0];
  r.isolated_node_fraction =
      r.num_nodes == 0 ? 0.0
                       : static_cast<double>(r.isolated_node_count) / static_cast<double>(r.num_nodes);

  // Handshake identity.
  if (degree_sum != r.sum_of_hyperedge_sizes) {
    throw Error("incidence count mismatch: sum of degrees != sum of hyperedge sizes");
  }
  return r;
}

}  // namespace hypermp
