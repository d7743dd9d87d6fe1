#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hypermp/hypergraph.hpp"

namespace hypermp {

/// P(a node of an n-member hyperedge is first sampled at epoch T) when c
/// members are drawn per epoch: (1 - c/n)^(T-1) * c/n. Requires 1 <= c <= n
/// and T >= 1; c > n throws InvalidArgument (the node is then seen every
/// epoch and the caller should use min(c, n)).
double first_sample_pmf(std::size_t n, std::size_t c, std::size_t epoch);

/// Mean of the geometric law above, n / c.
double expected_first_epoch(std::size_t n, std::size_t c);

/// Bounds on E[max_i T_i] for independent geometric waits, one per hyperedge
/// a node belongs to, with a Monte-Carlo estimate of the true value.
struct MaxWaitBound {
  double bound = 0.0;       // max_i n_i/c + sqrt((k-1) sum_i Var T_i)
  double aven_bound = 0.0;  // max_i n_i/c + sqrt((k-1)/k sum_i Var T_i)
  double monte_carlo_mean = 0.0;
  std::size_t trials = 0;
};

MaxWaitBound max_wait_bound(std::span<const std::size_t> sizes, std::size_t c,
                            std::size_t trials = 100000, std::uint64_t seed = 0);

/// Probability that node v shows up in at least one step-2 draw during one
/// epoch in which every hyperedge is visited once.
struct NodeSeenProbability {
  bool isolated = false;
  double exact = 0.0;          // 1 - prod_e (1 - min(L,|e|)/|e|)
  double literal_formula = 0.0;  // max{1 - prod_e L/(|e|-1), 1[min_e |e| < L]}
  double monte_carlo = 0.0;
  std::size_t trials = 0;
};

NodeSeenProbability node_seen_probability(const Hypergraph& h, NodeId v, std::size_t nodes_per_edge,
                                          std::size_t trials = 0, std::uint64_t seed = 0);

}  // namespace hypermp
