#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypermp/hypergraph.hpp"
#include "hypermp/kmeans.hpp"

namespace hypermp {

enum class RewireStrategy { kTrimming, kRetention, kRandomDrop, kLabelSplit, kKMeansSplit };

std::optional<RewireStrategy> parse_strategy(const std::string& name);
std::string to_string(RewireStrategy s);

struct RewireSpec {
  RewireStrategy strategy = RewireStrategy::kTrimming;
  double fraction = 0.0;  // drop strategies only, in [0, 1]
  std::uint64_t seed = 0;
  KMeansOptions kmeans;
  ElbowOptions elbow;
  /// Hyperedges smaller than this pass through kmeans_split unchanged.
  std::size_t min_split_size = 3;
  /// label_split: drop single-node sub-hyperedges instead of keeping them.
  bool drop_singletons = false;

  void validate() const;
};

/// Hyperedge indices sorted by ascending size, ties by original index.
std::vector<EdgeId> order_by_size(const Hypergraph& h);

/// floor(fraction * |E|), the number of hyperedges a drop strategy touches.
std::size_t fraction_count(double fraction, std::size_t num_edges);

/// Removes the floor(x|E|) smallest hyperedges.
Hypergraph trim(const Hypergraph& h, double fraction);
/// Keeps only the floor(x|E|) smallest hyperedges.
Hypergraph retain(const Hypergraph& h, double fraction);
/// Removes a uniformly random floor(x|E|)-subset of hyperedges.
Hypergraph random_drop(const Hypergraph& h, double fraction, std::uint64_t seed);

/// Replaces each hyperedge by one sub-hyperedge per class present in it.
Hypergraph label_split(const Hypergraph& h, const LabelAssignment& labels,
                       bool drop_singletons = false);

struct KMeansSplit {
  Hypergraph hypergraph;
  /// Chosen cluster count per input hyperedge (1 = unchanged).
  std::vector<std::size_t> clusters_per_edge;
};

/// Splits every hyperedge with |e| >= spec.min_split_size into the clusters
/// that k-means finds among its members' features, m chosen by the elbow rule
/// over 1..min(num_classes, |e|). Sub-hyperedges replace the original in
/// place, ordered by their smallest member.
KMeansSplit kmeans_split(const Hypergraph& h, const FeatureMatrix& features, std::size_t num_classes,
                         const RewireSpec& spec);

/// Dispatches on spec.strategy. Label/feature inputs are required by the
/// split strategies and ignored otherwise.
Hypergraph rewire(const Hypergraph& h, const RewireSpec& spec, const LabelAssignment* labels,
                  const FeatureMatrix* features);

}  // namespace hypermp
