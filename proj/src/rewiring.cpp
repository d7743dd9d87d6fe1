#include "hypermp/rewiring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypermp/error.hpp"
#include "hypermp/rng.hpp"

namespace hypermp {

std::optional<RewireStrategy> parse_strategy(const std::string& name) {
  if (name == "trimming" || name == "trim") return RewireStrategy::kTrimming;
  if (name == "retention" || name == "retain") return RewireStrategy::kRetention;
  if (name == "random-drop") return RewireStrategy::kRandomDrop;
  if (name == "label-split") return RewireStrategy::kLabelSplit;
  if (name == "kmeans-split") return RewireStrategy::kKMeansSplit;
  return std::nullopt;
}

std::string to_string(RewireStrategy s) {
  switch (s) {
    case RewireStrategy::kTrimming: return "trimming";
    case RewireStrategy::kRetention: return "retention";
    case RewireStrategy::kRandomDrop: return "random-drop";
    case RewireStrategy::kLabelSplit: return "label-split";
    case RewireStrategy::kKMeansSplit: return "kmeans-split";
  }
  return "unknown";
}

void RewireSpec::validate() const {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidArgument("fraction must lie in [0, 1]");
  if (kmeans.max_iters == 0 || kmeans.restarts == 0 || !(kmeans.tolerance > 0.0)) {
    throw InvalidArgument("k-means parameters must be positive");
  }
}

std::vector<EdgeId> order_by_size(const Hypergraph& h) {
  std::vector<EdgeId> order(h.num_edges());
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return h.edge(a).size() < h.edge(b).size();
  });
  return order;
}

std::size_t fraction_count(double fraction, std::size_t num_edges) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidArgument("fraction must lie in [0, 1]");
  // The slack keeps decimal fractions exact: 0.29 * 100 is 28.999999999999996.
  const double raw = fraction * static_cast<double>(num_edges);
  return std::min(num_edges, static_cast<std::size_t>(std::floor(raw + 1e-9 * (1.0 + raw))));
}

namespace {

Hypergraph keep_mask(const Hypergraph& h, const std::vector<bool>& keep) {
  return subhypergraph(h, [&](EdgeId e) { return static_cast<bool>(keep[e]); });
}

}  // namespace

Hypergraph trim(const Hypergraph& h, double fraction) {
  auto count = fraction_count(fraction, h.num_edges());
  auto order = order_by_size(h);
  std::vector<bool> keep(h.num_edges(), true);
  for (std::size_t i = 0; i < count; ++i) keep[order[i]] = false;
  return keep_mask(h, keep);
}

Hypergraph retain(const Hypergraph& h, double fraction) {
  auto count = fraction_count(fraction, h.num_edges());
  auto order = order_by_size(h);
  std::vector<bool> keep(h.num_edges(), false);
  for (std::size_t i = 0; i < count; ++i) keep[order[i]] = true;
  return keep_mask(h, keep);
}

Hypergraph random_drop(const Hypergraph& h, double fraction, std::uint64_t seed) {
  auto count = fraction_count(fraction, h.num_edges());
  std::vector<EdgeId> ids(h.num_edges());
  std::iota(ids.begin(), ids.end(), EdgeId{0});
  Rng rng(seed);
  std::vector<bool> keep(h.num_edges(), true);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + rng.below(ids.size() - i);
    std::swap(ids[i], ids[j]);
    keep[ids[i]] = false;
  }
  return keep_mask(h, keep);
}

Hypergraph label_split(const Hypergraph& h, const LabelAssignment& labels, bool drop_singletons) {
  std::vector<std::vector<NodeId>> out;
  std::vector<std::vector<NodeId>> by_class(labels.num_classes);
  for (const auto& e : h.edges()) {
    for (auto& bucket : by_class) bucket.clear();
    for (NodeId v : e) by_class[labels[v]].push_back(v);
    for (auto& bucket : by_class) {
      if (bucket.empty() || (drop_singletons && bucket.size() == 1)) continue;
      out.push_back(bucket);
    }
  }
  return Hypergraph(h.num_nodes(), std::move(out));
}

KMeansSplit kmeans_split(const Hypergraph& h, const FeatureMatrix& features, std::size_t num_classes,
                         const RewireSpec& spec) {
  spec.validate();
  features.validate(h.num_nodes());
  if (num_classes < 2) throw InvalidArgument("kmeans_split needs at least 2 classes");

  KMeansSplit result;
  std::vector<std::vector<NodeId>> out;
  result.clusters_per_edge.reserve(h.num_edges());
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    auto members = h.edge(e);
    if (members.size() < std::max<std::size_t>(spec.min_split_size, 2)) {
      out.emplace_back(members.begin(), members.end());
      result.clusters_per_edge.push_back(1);
      continue;
    }
    FeatureMatrix points(members.size(), features.cols);
    for (std::size_t i = 0; i < members.size(); ++i) {
      std::copy_n(features.row(members[i]).begin(), features.cols, points.row(i).begin());
    }
    KMeansOptions opts = spec.kmeans;
    opts.seed = derive_seed(spec.seed, e);
    auto sweep = kmeans_sweep(points, std::min(num_classes, members.size()), opts, spec.elbow);
    result.clusters_per_edge.push_back(sweep.m);
    std::vector<std::vector<NodeId>> parts(sweep.m);
    for (std::size_t i = 0; i < members.size(); ++i) parts[sweep.assignments[i]].push_back(members[i]);
    std::erase_if(parts, [](const auto& p) { return p.empty(); });
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (auto& p : parts) out.push_back(std::move(p));
  }
  result.hypergraph = Hypergraph(h.num_nodes(), std::move(out));
  return result;
}

Hypergraph rewire(const Hypergraph& h, const RewireSpec& spec, const LabelAssignment* labels,
                  const FeatureMatrix* features) {
  spec.validate();
  switch (spec.strategy) {
    case RewireStrategy::kTrimming: return trim(h, spec.fraction);
    case RewireStrategy::kRetention: return retain(h, spec.fraction);
    case RewireStrategy::kRandomDrop: return random_drop(h, spec.fraction, spec.seed);
    case RewireStrategy::kLabelSplit:
      if (!labels) throw InvalidArgument("label-split needs node labels");
      return label_split(h, *labels, spec.drop_singletons);
    case RewireStrategy::kKMeansSplit:
      if (!features) throw InvalidArgument("kmeans-split needs node features");
      if (!labels) throw InvalidArgument("kmeans-split needs the class count (labels)");
      return kmeans_split(h, *features, labels->num_classes, spec).hypergraph;
  }
  throw InvalidArgument("unknown rewiring strategy");
}

}  // namespace hypermp
