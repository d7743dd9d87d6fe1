#include "hypermp/sampling_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hypermp/error.hpp"
#include "hypermp/rng.hpp"

namespace hypermp {

double first_sample_pmf(std::size_t n, std::size_t c, std::size_t epoch) {
  if (c < 1 || n < 1 || epoch < 1) throw InvalidArgument("first_sample_pmf needs n, c, T >= 1");
  if (c > n) throw InvalidArgument("first_sample_pmf: c > n (node is sampled every epoch)");
  double p = static_cast<double>(c) / static_cast<double>(n);
  return std::pow(1.0 - p, static_cast<double>(epoch - 1)) * p;
}

double expected_first_epoch(std::size_t n, std::size_t c) {
  if (c < 1 || c > n) throw InvalidArgument("expected_first_epoch needs 1 <= c <= n");
  return static_cast<double>(n) / static_cast<double>(c);
}

namespace {

std::size_t draw_geometric(double p, Rng& rng) {
  if (p >= 1.0) return 1;
  double u = 1.0 - rng.uniform();  // (0, 1]
  return 1 + static_cast<std::size_t>(std::floor(std::log(u) / std::log1p(-p)));
}

}  // namespace

MaxWaitBound max_wait_bound(std::span<const std::size_t> sizes, std::size_t c, std::size_t trials,
                            std::uint64_t seed) {
  if (sizes.empty()) throw InvalidArgument("max_wait_bound needs at least one hyperedge size");
  if (c < 1) throw InvalidArgument("max_wait_bound needs c >= 1");
  for (auto n : sizes) {
    if (n < c) throw InvalidArgument("max_wait_bound needs every size >= c");
  }
  const double k = static_cast<double>(sizes.size());
  std::vector<double> p(sizes.size());
  double max_mean = 0.0;
  double var_sum = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    p[i] = static_cast<double>(c) / static_cast<double>(sizes[i]);
    max_mean = std::max(max_mean, 1.0 / p[i]);
    var_sum += (1.0 - p[i]) / (p[i] * p[i]);
  }
  MaxWaitBound r;
  r.bound = max_mean + std::sqrt((k - 1.0) * var_sum);
  r.aven_bound = max_mean + std::sqrt((k - 1.0) / k * var_sum);
  r.trials = trials;
  if (trials > 0) {
    Rng rng(seed);
    double total = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      std::size_t worst = 0;
      for (double pi : p) worst = std::max(worst, draw_geometric(pi, rng));
      total += static_cast<double>(worst);
    }
    r.monte_carlo_mean = total / static_cast<double>(trials);
  }
  return r;
}

NodeSeenProbability node_seen_probability(const Hypergraph& h, NodeId v, std::size_t nodes_per_edge,
                                          std::size_t trials, std::uint64_t seed) {
  if (v >= h.num_nodes()) throw InvalidArgument("node id out of range");
  if (nodes_per_edge < 1) throw InvalidArgument("nodes per hyperedge must be >= 1");
  NodeSeenProbability r;
  auto member = h.memberships(v);
  if (member.empty()) {
    r.isolated = true;
    return r;
  }
  const double c = static_cast<double>(nodes_per_edge);
  double miss = 1.0;
  double literal_product = 1.0;
  std::size_t min_size = std::numeric_limits<std::size_t>::max();
  for (EdgeId e : member) {
    auto size = h.edge(e).size();
    min_size = std::min(min_size, size);
    double n = static_cast<double>(size);
    miss *= 1.0 - std::min(c, n) / n;
    literal_product *= size > 1 ? c / (n - 1.0) : std::numeric_limits<double>::infinity();
  }
  r.exact = miss <= 0.0 ? 1.0 : 1.0 - miss;
  r.literal_formula = std::max(1.0 - literal_product, min_size < nodes_per_edge ? 1.0 : 0.0);

  if (trials > 0) {
    Rng rng(seed);
    std::vector<std::size_t> slots;
    std::size_t seen = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      bool hit = false;
      for (EdgeId e : member) {
        auto size = h.edge(e).size();
        auto take = std::min(nodes_per_edge, size);
        // Slot 0 stands for v; draw `take` distinct slots.
        slots.resize(size);
        std::iota(slots.begin(), slots.end(), std::size_t{0});
        for (std::size_t j = 0; j < take && !hit; ++j) {
          std::size_t k = j + rng.below(size - j);
          std::swap(slots[j], slots[k]);
          hit = slots[j] == 0;
        }
        if (hit) break;
      }
      seen += hit ? 1 : 0;
    }
    r.trials = trials;
    r.monte_carlo = static_cast<double>(seen) / static_cast<double>(trials);
  }
  return r;
}

}  // namespace hypermp
