#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hypermp/hypergraph.hpp"
#include "hypermp/io.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) { return std::string(HYPERMP_DATA_DIR) + "/" + name; }

inline hypermp::Dataset zoo() { return hypermp::load_dataset(data_path("zoo.json")); }

struct RandomInstance {
  hypermp::Hypergraph h;
  hypermp::LabelAssignment labels;
};

// Random hypergraph with n nodes, m non-empty edges, C classes. Some nodes
// may end up isolated.
inline RandomInstance random_instance(std::mt19937_64& gen, std::size_t max_n, std::size_t max_edges,
                                      std::size_t max_classes) {
  std::uniform_int_distribution<std::size_t> nd(1, max_n), md(0, max_edges), cd(1, max_classes);
  std::size_t n = nd(gen), m = md(gen), c = cd(gen);
  std::vector<std::vector<hypermp::NodeId>> edges;
  std::uniform_int_distribution<std::size_t> sd(1, n);
  for (std::size_t e = 0; e < m; ++e) {
    std::vector<hypermp::NodeId> all(n);
    std::iota(all.begin(), all.end(), 0u);
    std::shuffle(all.begin(), all.end(), gen);
    all.resize(sd(gen));
    edges.push_back(all);
  }
  RandomInstance r{hypermp::Hypergraph(n, edges), {}};
  std::uniform_int_distribution<std::uint32_t> ld(0, static_cast<std::uint32_t>(c - 1));
  for (std::size_t v = 0; v < n; ++v) r.labels.labels.push_back(ld(gen));
  r.labels.num_classes = c;
  return r;
}

inline hypermp::FeatureMatrix random_features(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
  hypermp::FeatureMatrix x(rows, cols);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (auto& v : x.values) v = nd(gen);
  return x;
}

}  // namespace testutil
