#include "hypermp/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypermp/error.hpp"

namespace hypermp {

Hypergraph::Hypergraph(std::size_t num_nodes, std::vector<std::vector<NodeId>> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  std::vector<std::size_t> degree(num_nodes_ + 1, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto& members = edges_[e];
    if (members.empty()) {
      throw ValidationError("hyperedge " + std::to_string(e) + " is empty");
    }
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i] >= num_nodes_) {
        throw ValidationError("hyperedge " + std::to_string(e) + ": node id " +
                              std::to_string(members[i]) + " out of range (num_nodes=" +
                              std::to_string(num_nodes_) + ")");
      }
      if (i > 0 && members[i] == members[i - 1]) {
        throw ValidationError("hyperedge " + std::to_string(e) + ": duplicate node id " +
                              std::to_string(members[i]));
      }
      ++degree[members[i] + 1];
    }
  }

  member_offsets_.assign(num_nodes_ + 1, 0);
  for (std::size_t v = 0; v < num_nodes_; ++v) {
    member_offsets_[v + 1] = member_offsets_[v] + degree[v + 1];
  }
  member_edges_.resize(member_offsets_.back());
  std::vector<std::size_t> cursor(member_offsets_.begin(), member_offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    for (NodeId v : edges_[e]) member_edges_[cursor[v]++] = static_cast<EdgeId>(e);
  }
}

void LabelAssignment::validate(std::optional<std::size_t> num_nodes) const {
  if (num_classes < 1) throw ValidationError("num_classes must be >= 1");
  if (num_nodes && labels.size() != *num_nodes) {
    throw ValidationError("label count " + std::to_string(labels.size()) +
                          " does not match num_nodes " + std::to_string(*num_nodes));
  }
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] >= num_classes) {
      throw ValidationError("node " + std::to_string(v) + ": label " + std::to_string(labels[v]) +
                            " >= num_classes " + std::to_string(num_classes));
    }
  }
}

void FeatureMatrix::validate(std::optional<std::size_t> num_nodes) const {
  if (values.size() != rows * cols) throw ValidationError("feature matrix shape mismatch");
  if (num_nodes && rows != *num_nodes) {
    throw ValidationError("feature row count " + std::to_string(rows) +
                          " does not match num_nodes " + std::to_string(*num_nodes));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("node " + std::to_string(i / cols) + ": non-finite feature value");
    }
  }
}

Hypergraph subhypergraph(const Hypergraph& h, const std::function<bool(EdgeId)>& keep) {
  std::vector<std::vector<NodeId>> kept;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    if (keep(e)) kept.push_back(h.edges()[e]);
  }
  return Hypergraph(h.num_nodes(), std::move(kept));
}

Adjacency clique_expand(const Hypergraph& h) {
  Adjacency adj(h.num_nodes());
  for (NodeId v = 0; v < h.num_nodes(); ++v) {
    auto& nb = adj[v];
    for (EdgeId e : h.memberships(v)) {
      for (NodeId u : h.edge(e)) {
        if (u != v) nb.push_back(u);
      }
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

}  // namespace hypermp
