#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hypermp/hypergraph.hpp"

namespace hypermp {

/// Exact arithmetic for small-instance checks of the homophily recursions.
using Rational = boost::multiprecision::cpp_rational;

/// Per-hyperedge class distribution h_e(c), stored row-major |E| x C.
template <typename Scalar>
struct EdgeClassScores {
  std::size_t num_edges = 0;
  std::size_t num_classes = 0;
  std::vector<Scalar> values;

  Scalar& at(EdgeId e, ClassId c) { return values[e * num_classes + c]; }
  const Scalar& at(EdgeId e, ClassId c) const { return values[e * num_classes + c]; }
  std::span<const Scalar> row(EdgeId e) const {
    return {values.data() + e * num_classes, num_classes};
  }
};

/// Scores of the alternating node/hyperedge mean aggregation.
///
/// edge_scores[t] holds h_e^t(c) for t = 0..levels and node_scores[t] holds
/// h_v^t = mean_{e in E_v} h_e^t(y_v). Isolated nodes have no defined score;
/// their slot holds 0 and `defined[v]` is false.
template <typename Scalar>
struct HomophilyTrace {
  std::size_t levels = 0;
  std::vector<EdgeClassScores<Scalar>> edge_scores;
  std::vector<std::vector<Scalar>> node_scores;
  std::vector<bool> defined;

  std::size_t num_nodes() const { return defined.size(); }
};

/// h_e^0(c): fraction of e's members with label c.
template <typename Scalar = double>
EdgeClassScores<Scalar> edge_homophily_0(const Hypergraph& h, const LabelAssignment& labels) {
  EdgeClassScores<Scalar> out{h.num_edges(), labels.num_classes, {}};
  out.values.assign(h.num_edges() * labels.num_classes, Scalar(0));
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    auto members = h.edge(e);
    std::vector<std::size_t> counts(labels.num_classes, 0);
    for (NodeId v : members) ++counts[labels[v]];
    for (ClassId c = 0; c < labels.num_classes; ++c) {
      out.at(e, c) = Scalar(counts[c]) / Scalar(members.size());
    }
  }
  return out;
}

/// Message-passing homophily up to `levels` rounds with mean aggregation.
/// A class absent from e gets h_e^t(c) = 0.
template <typename Scalar = double>
HomophilyTrace<Scalar> mp_homophily(const Hypergraph& h, const LabelAssignment& labels,
                                    std::size_t levels) {
  const auto n = h.num_nodes();
  const auto num_classes = labels.num_classes;
  HomophilyTrace<Scalar> trace;
  trace.levels = levels;
  trace.defined.resize(n);
  for (NodeId v = 0; v < n; ++v) trace.defined[v] = !h.is_isolated(v);

  trace.edge_scores.push_back(edge_homophily_0<Scalar>(h, labels));
  for (std::size_t t = 0;; ++t) {
    const auto& edge_t = trace.edge_scores[t];
    std::vector<Scalar> node_t(n, Scalar(0));
    for (NodeId v = 0; v < n; ++v) {
      auto member = h.memberships(v);
      if (member.empty()) continue;
      Scalar sum(0);
      for (EdgeId e : member) sum += edge_t.at(e, labels[v]);
      node_t[v] = sum / Scalar(member.size());
    }
    trace.node_scores.push_back(std::move(node_t));
    if (t == levels) break;

    const auto& prev = trace.node_scores.back();
    EdgeClassScores<Scalar> next{h.num_edges(), num_classes, {}};
    next.values.assign(h.num_edges() * num_classes, Scalar(0));
    std::vector<std::size_t> counts(num_classes);
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
      std::fill(counts.begin(), counts.end(), 0);
      for (NodeId v : h.edge(e)) {
        next.at(e, labels[v]) += prev[v];
        ++counts[labels[v]];
      }
      for (ClassId c = 0; c < num_classes; ++c) {
        if (counts[c] > 0) next.at(e, c) /= Scalar(counts[c]);
      }
    }
    trace.edge_scores.push_back(std::move(next));
  }
  return trace;
}

enum class IsolatedPolicy { kCountAsStable, kExclude };

struct DeltaReport {
  std::size_t t = 1;
  double mu = 0.1;
  double value = 0.0;
  IsolatedPolicy policy = IsolatedPolicy::kCountAsStable;
};

/// Fraction of nodes with |h_v^t - h_v^{t-1}| < mu. Throws InvalidArgument
/// when t is 0 or exceeds the trace depth, or mu <= 0.
DeltaReport delta_homophily(const HomophilyTrace<double>& trace, std::size_t t = 1, double mu = 0.1,
                            IsolatedPolicy policy = IsolatedPolicy::kCountAsStable);

/// Mean over nodes of the same-label fraction of clique-expansion neighbours.
/// Nodes without neighbours contribute 1.
double ce_homophily(const Hypergraph& h, const LabelAssignment& labels);

/// Affinity / baseline analysis restricted to hyperedges of size k.
struct KUniformClassScores {
  bool participates = false;  // class c has at least one member in a size-k edge
  std::size_t class_size = 0;
  // Indexed by t - 1 for t = 1..k.
  std::vector<double> affinity;
  std::vector<double> baseline;
  std::vector<double> ratio;  // NaN where the baseline is 0
  std::vector<double> normalized_bias;
};

struct KUniformReport {
  std::size_t k = 0;
  std::size_t num_size_k_edges = 0;
  std::vector<KUniformClassScores> classes;  // empty when there are no size-k edges
};

KUniformReport kuniform_scores(const Hypergraph& h, const LabelAssignment& labels, std::size_t k);

/// C(n_c - 1, t - 1) C(n - n_c, k - t) / C(n - 1, k - 1).
double kuniform_baseline(std::size_t n, std::size_t class_size, std::size_t k, std::size_t t);

/// (acc_a - acc_b) / (100 - acc_b), accuracies in percent. Throws
/// InvalidArgument when acc_b == 100 or inputs are outside [0, 100].
double normalized_accuracy(double acc_a, double acc_b);

/// Convenience summaries used by the CLI and reports.
double mean_defined(const std::vector<double>& scores, const std::vector<bool>& defined,
                    bool isolated_as_zero = false);
std::vector<double> per_class_mean(const std::vector<double>& scores,
                                   const std::vector<bool>& defined,
                                   const LabelAssignment& labels);

}  // namespace hypermp
