#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hypermp/hypergraph.hpp"
#include "hypermp/rng.hpp"

namespace hypermp {

enum class SamplingMode { kUniform, kSizeWeighted };

/// Two-step mini-batch sampling parameters.
///
/// Step 1 draws `batch_edges` hyperedges without replacement (0 skips the
/// step and takes every hyperedge). Step 2 draws min(nodes_per_edge, |e|)
/// members of each drawn hyperedge and pads the row to nodes_per_edge.
struct SamplerConfig {
  std::size_t batch_edges = 0;
  std::size_t nodes_per_edge = 1;
  SamplingMode mode = SamplingMode::kUniform;
  std::uint64_t seed = 0;
  /// Step-1 weight in size-weighted mode; defaults to |e|.
  std::function<double(std::size_t edge_size)> weight;

  void validate(const Hypergraph& h) const;
};

/// B x L node matrix. Padded cells hold `pad` (== num_nodes) and mask 0.
struct MiniBatch {
  std::vector<EdgeId> edge_ids;
  std::size_t width = 0;
  NodeId pad = 0;
  std::vector<NodeId> nodes;
  std::vector<std::uint8_t> mask;

  std::size_t rows() const { return edge_ids.size(); }
  std::span<const NodeId> row(std::size_t i) const { return {nodes.data() + i * width, width}; }
  std::span<const std::uint8_t> row_mask(std::size_t i) const {
    return {mask.data() + i * width, width};
  }
};

/// One batch: step 1 then step 2, consuming `rng`.
MiniBatch sample_batch(const Hypergraph& h, const SamplerConfig& cfg, Rng& rng);

/// Step 2 alone for an explicit list of hyperedges.
MiniBatch sample_nodes(const Hypergraph& h, std::span<const EdgeId> edges, std::size_t width, Rng& rng);

/// Stateful sampler owning its RNG stream.
class MiniBatchSampler {
 public:
  MiniBatchSampler(const Hypergraph& h, SamplerConfig cfg);

  MiniBatch next();
  /// ceil(|E|/B) batches partitioning E by a seeded (optionally size-weighted)
  /// shuffle; one batch of every hyperedge when step 1 is skipped.
  std::vector<MiniBatch> epoch();

  const SamplerConfig& config() const { return cfg_; }

 private:
  const Hypergraph* h_;
  SamplerConfig cfg_;
  Rng rng_;
};

/// Normalized class histograms and their total-variation distance from the
/// original label distribution.
struct ClassShiftReport {
  std::vector<double> original;
  std::vector<double> step1;   // every member of each drawn hyperedge
  std::vector<double> step12;  // masked (sampled) node occurrences
  double tv_step1 = 0.0;
  double tv_step12 = 0.0;
};

ClassShiftReport class_shift(const Hypergraph& h, const LabelAssignment& labels,
                             const SamplerConfig& cfg, std::size_t num_batches);

double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace hypermp
