#include "hypermp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hypermp/error.hpp"

namespace hypermp {

namespace {

double edge_weight(const SamplerConfig& cfg, std::size_t size) {
  return cfg.weight ? cfg.weight(size) : static_cast<double>(size);
}

// Draws `count` distinct hyperedges, successively proportional to weight
// among those not yet drawn.
std::vector<EdgeId> weighted_without_replacement(const Hypergraph& h, const SamplerConfig& cfg,
                                                 std::size_t count, Rng& rng) {
  std::vector<EdgeId> remaining(h.num_edges());
  std::iota(remaining.begin(), remaining.end(), EdgeId{0});
  std::vector<double> weights(h.num_edges());
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    weights[e] = edge_weight(cfg, h.edge(e).size());
    if (!(weights[e] >= 0.0) || !std::isfinite(weights[e])) {
      throw InvalidArgument("edge weight must be finite and non-negative");
    }
  }
  std::vector<EdgeId> drawn;
  drawn.reserve(count);
  std::vector<double> cumulative(remaining.size());
  while (drawn.size() < count) {
    double total = 0.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      total += weights[remaining[i]];
      cumulative[i] = total;
    }
    std::size_t pick;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.begin() + remaining.size(), target) -
          cumulative.begin());
      pick = std::min(pick, remaining.size() - 1);
    } else {
      pick = rng.below(remaining.size());
    }
    drawn.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return drawn;
}

std::vector<EdgeId> uniform_without_replacement(std::size_t num_edges, std::size_t count, Rng& rng) {
  std::vector<EdgeId> ids(num_edges);
  std::iota(ids.begin(), ids.end(), EdgeId{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + rng.below(num_edges - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(count);
  return ids;
}

std::vector<EdgeId> step1(const Hypergraph& h, const SamplerConfig& cfg, std::size_t count, Rng& rng) {
  return cfg.mode == SamplingMode::kUniform ? uniform_without_replacement(h.num_edges(), count, rng)
                                            : weighted_without_replacement(h, cfg, count, rng);
}

}  // namespace

void SamplerConfig::validate(const Hypergraph& h) const {
  if (nodes_per_edge < 1) throw InvalidArgument("nodes per hyperedge (L) must be >= 1");
  if (batch_edges > h.num_edges()) {
    throw InvalidArgument("batch size B=" + std::to_string(batch_edges) +
                          " exceeds the number of hyperedges " + std::to_string(h.num_edges()));
  }
}

MiniBatch sample_nodes(const Hypergraph& h, std::span<const EdgeId> edges, std::size_t width, Rng& rng) {
  MiniBatch batch;
  batch.edge_ids.assign(edges.begin(), edges.end());
  batch.width = width;
  batch.pad = static_cast<NodeId>(h.num_nodes());
  batch.nodes.assign(edges.size() * width, batch.pad);
  batch.mask.assign(edges.size() * width, 0);
  std::vector<NodeId> pool;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto members = h.edge(edges[i]);
    pool.assign(members.begin(), members.end());
    std::size_t take = std::min(width, pool.size());
    for (std::size_t j = 0; j < take; ++j) {
      std::size_t k = j + rng.below(pool.size() - j);
      std::swap(pool[j], pool[k]);
      batch.nodes[i * width + j] = pool[j];
      batch.mask[i * width + j] = 1;
    }
  }
  return batch;
}

MiniBatch sample_batch(const Hypergraph& h, const SamplerConfig& cfg, Rng& rng) {
  cfg.validate(h);
  std::vector<EdgeId> edges;
  if (cfg.batch_edges == 0) {
    edges.resize(h.num_edges());
    std::iota(edges.begin(), edges.end(), EdgeId{0});
  } else {
    edges = step1(h, cfg, cfg.batch_edges, rng);
  }
  return sample_nodes(h, edges, cfg.nodes_per_edge, rng);
}

MiniBatchSampler::MiniBatchSampler(const Hypergraph& h, SamplerConfig cfg)
    : h_(&h), cfg_(std::move(cfg)), rng_(cfg_.seed) {
  cfg_.validate(h);
}

MiniBatch MiniBatchSampler::next() { return sample_batch(*h_, cfg_, rng_); }

std::vector<MiniBatch> MiniBatchSampler::epoch() {
  std::vector<MiniBatch> out;
  if (cfg_.batch_edges == 0) {
    out.push_back(next());
    return out;
  }
  auto order = step1(*h_, cfg_, h_->num_edges(), rng_);
  for (std::size_t start = 0; start < order.size(); start += cfg_.batch_edges) {
    std::size_t stop = std::min(order.size(), start + cfg_.batch_edges);
    std::span<const EdgeId> chunk(order.data() + start, stop - start);
    out.push_back(sample_nodes(*h_, chunk, cfg_.nodes_per_edge, rng_));
  }
  return out;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

ClassShiftReport class_shift(const Hypergraph& h, const LabelAssignment& labels,
                             const SamplerConfig& cfg, std::size_t num_batches) {
  if (num_batches < 1) throw InvalidArgument("num_batches must be >= 1");
  const auto num_classes = labels.num_classes;
  std::vector<double> original(num_classes, 0.0);
  std::vector<double> step1_counts(num_classes, 0.0);
  std::vector<double> step12_counts(num_classes, 0.0);
  for (NodeId v = 0; v < h.num_nodes(); ++v) original[labels[v]] += 1.0;

  Rng rng(cfg.seed);
  for (std::size_t b = 0; b < num_batches; ++b) {
    auto batch = sample_batch(h, cfg, rng);
    for (std::size_t i = 0; i < batch.rows(); ++i) {
      for (NodeId v : h.edge(batch.edge_ids[i])) step1_counts[labels[v]] += 1.0;
      auto row = batch.row(i);
      auto mask = batch.row_mask(i);
      for (std::size_t j = 0; j < batch.width; ++j) {
        if (mask[j]) step12_counts[labels[row[j]]] += 1.0;
      }
    }
  }

  auto normalize = [](std::vector<double>& hist) {
    double total = std::accumulate(hist.begin(), hist.end(), 0.0);
    if (total > 0.0) {
      for (auto& x : hist) x /= total;
    }
  };
  normalize(original);
  normalize(step1_counts);
  normalize(step12_counts);

  ClassShiftReport r;
  r.tv_step1 = total_variation(step1_counts, original);
  r.tv_step12 = total_variation(step12_counts, original);
  r.original = std::move(original);
  r.step1 = std::move(step1_counts);
  r.step12 = std::move(step12_counts);
  return r;
}

}  // namespace hypermp
