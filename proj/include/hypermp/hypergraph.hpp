#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hypermp {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using ClassId = std::uint32_t;

/// Immutable hypergraph over dense node ids [0, n).
///
/// Each hyperedge is stored as a sorted, duplicate-free list of node ids and
/// hyperedge order is significant. Node membership lists (the hyperedges
/// containing each node, in ascending edge index) are built once on
/// construction.
class Hypergraph {
 public:
  Hypergraph() = default;

  /// Validates and canonicalizes `edges` (each edge is sorted). Throws
  /// ValidationError naming the offending edge on out-of-range ids,
  /// duplicates, or empty hyperedges.
  Hypergraph(std::size_t num_nodes, std::vector<std::vector<NodeId>> edges);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const NodeId> edge(EdgeId e) const { return edges_[e]; }
  const std::vector<std::vector<NodeId>>& edges() const { return edges_; }

  /// Hyperedges containing v, ascending.
  std::span<const EdgeId> memberships(NodeId v) const {
    return {member_edges_.data() + member_offsets_[v],
            member_offsets_[v + 1] - member_offsets_[v]};
  }
  std::size_t degree(NodeId v) const {
    return member_offsets_[v + 1] - member_offsets_[v];
  }
  bool is_isolated(NodeId v) const { return degree(v) == 0; }

  /// Σ_e |e|, the number of (node, hyperedge) incidences.
  std::size_t num_incidences() const { return member_edges_.size(); }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t num_nodes_ = 0;
  std::vector<std::vector<NodeId>> edges_;
  std::vector<std::size_t> member_offsets_{0};
  std::vector<EdgeId> member_edges_;
};

/// Per-node class ids in [0, num_classes).
struct LabelAssignment {
  std::vector<ClassId> labels;
  std::size_t num_classes = 1;

  /// Throws ValidationError unless every label is < num_classes, num_classes
  /// >= 1, and (when num_nodes is given) labels.size() == num_nodes.
  void validate(std::optional<std::size_t> num_nodes = std::nullopt) const;
  std::size_t size() const { return labels.size(); }
  ClassId operator[](NodeId v) const { return labels[v]; }
};

/// Dense row-major real matrix; row v holds node v's feature vector.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  /// Throws ValidationError on non-finite values or a shape mismatch.
  void validate(std::optional<std::size_t> num_nodes = std::nullopt) const;
};

/// Keeps the hyperedges whose index satisfies `keep`, in original order.
Hypergraph subhypergraph(const Hypergraph& h, const std::function<bool(EdgeId)>& keep);

/// Clique expansion: adjacency[v] lists the distinct neighbours of v
/// (ascending, no self loops).
using Adjacency = std::vector<std::vector<NodeId>>;
Adjacency clique_expand(const Hypergraph& h);

}  // namespace hypermp
