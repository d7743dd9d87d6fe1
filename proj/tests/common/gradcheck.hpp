#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hypermp/model.hpp"
#include "hypermp/sampler.hpp"
#include "test_util.hpp"

namespace testutil {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t num_params = 0;
};

// Central differences of the training loss against loss_and_grad. A step of
// 1e-5 is too coarse where LayerNorm over two features is sharply curved.
inline GradCheckResult grad_check(const hypermp::Model& model, const hypermp::Hypergraph& h,
                                  const hypermp::FeatureMatrix& x, const hypermp::LabelAssignment& labels,
                                  const std::vector<std::uint8_t>& mask, double wd,
                                  const hypermp::MiniBatch* batch, const hypermp::ForwardOptions& opts,
                                  double step = 1e-6) {
  using namespace hypermp;
  auto analytic = loss_and_grad(model, forward(model, h, x, batch, opts), labels, mask, wd).grad;
  Model probe = model;
  GradCheckResult r;
  r.num_params = model.params.size();
  for (std::size_t i = 0; i < model.params.size(); ++i) {
    const double orig = model.params[i];
    probe.params[i] = orig + step;
    double up = loss_and_grad(probe, forward(probe, h, x, batch, opts), labels, mask, wd).loss;
    probe.params[i] = orig - step;
    double down = loss_and_grad(probe, forward(probe, h, x, batch, opts), labels, mask, wd).loss;
    probe.params[i] = orig;
    double numeric = (up - down) / (2.0 * step);
    double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    double rel = std::abs(analytic[i] - numeric) / scale;
    if (rel > r.max_rel_error) {
      r.max_rel_error = rel;
      r.worst_index = i;
    }
  }
  return r;
}

struct GradInstance {
  hypermp::Hypergraph h;
  hypermp::FeatureMatrix x;
  hypermp::LabelAssignment labels;
  std::vector<std::uint8_t> mask;
  hypermp::ModelDims dims;
  double wd = 0.0;
};

// n <= 8, |E| <= 5, d <= 4.
inline GradInstance random_grad_instance(std::mt19937_64& gen) {
  GradInstance g;
  auto inst = random_instance(gen, 8, 5, 3);
  while (inst.h.num_nodes() < 3 || inst.h.num_edges() == 0) inst = random_instance(gen, 8, 5, 3);
  g.h = inst.h;
  g.labels = inst.labels;
  std::uniform_int_distribution<std::size_t> f(1, 4), d(2, 4), hid(2, 5), t(1, 2);
  g.dims = {f(gen), d(gen), hid(gen), t(gen), g.labels.num_classes};
  g.x = random_features(gen, g.h.num_nodes(), g.dims.in_features);
  std::bernoulli_distribution coin(0.7);
  g.mask.assign(g.h.num_nodes(), 0);
  for (auto& m : g.mask) m = coin(gen);
  g.mask[0] = 1;
  g.wd = std::uniform_real_distribution<double>(0.0, 0.05)(gen);
  return g;
}

// Three well-separated classes of 20 nodes; every hyperedge is single-class
// and every node is covered.
struct SyntheticTask {
  hypermp::Hypergraph h;
  hypermp::FeatureMatrix x;
  hypermp::LabelAssignment labels;
};

inline SyntheticTask separable_task(std::uint64_t seed, double sigma = 0.1) {
  std::mt19937_64 gen(seed);
  const std::size_t per_class = 20, classes = 3, n = per_class * classes;
  SyntheticTask t;
  t.labels.num_classes = classes;
  t.x = hypermp::FeatureMatrix(n, classes);
  std::normal_distribution<double> noise(0.0, sigma);
  for (std::size_t v = 0; v < n; ++v) {
    auto c = static_cast<hypermp::ClassId>(v / per_class);
    t.labels.labels.push_back(c);
    for (std::size_t j = 0; j < classes; ++j) t.x(v, j) = (j == c ? 1.0 : 0.0) + noise(gen);
  }
  std::vector<std::vector<hypermp::NodeId>> edges;
  std::uniform_int_distribution<std::size_t> size(2, 6);
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<hypermp::NodeId> members(per_class);
    std::iota(members.begin(), members.end(), static_cast<hypermp::NodeId>(c * per_class));
    // four edges of five cover the class, four more are random
    std::shuffle(members.begin(), members.end(), gen);
    for (std::size_t e = 0; e < 4; ++e)
      edges.emplace_back(members.begin() + static_cast<std::ptrdiff_t>(5 * e),
                         members.begin() + static_cast<std::ptrdiff_t>(5 * e + 5));
    for (int e = 0; e < 4; ++e) {
      std::shuffle(members.begin(), members.end(), gen);
      edges.emplace_back(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(size(gen)));
    }
  }
  t.h = hypermp::Hypergraph(n, edges);
  return t;
}

}  // namespace testutil
