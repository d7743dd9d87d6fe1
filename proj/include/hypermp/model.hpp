#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hypermp/hypergraph.hpp"
#include "hypermp/sampler.hpp"

namespace hypermp {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ModelKind : std::uint32_t { kMultiSetMixer = 0, kMlp = 1, kMlpCb = 2 };

std::optional<ModelKind> parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

struct ModelDims {
  std::size_t in_features = 0;  // f_in
  std::size_t width = 0;        // d
  std::size_t mlp_hidden = 0;   // hidden size of every two-layer MLP
  std::size_t layers = 0;       // T
  std::size_t classes = 0;      // C
  bool operator==(const ModelDims&) const = default;
};

/// Location of one parameter tensor inside the flat parameter vector.
struct TensorSlot {
  std::string name;
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t size() const { return rows * cols; }
  bool operator==(const TensorSlot&) const = default;
};

/// Offsets of a layer-norm + two-layer MLP block.
struct BlockSlots {
  std::size_t ln_scale, ln_shift, w1, b1, w2, b2;
  bool operator==(const BlockSlots&) const = default;
};

/// Flat parameter layout. Order: input projection (W, b), then per layer
/// the hyperedge block (MultiSetMixer only) followed by the node block, each
/// block being [LN scale, LN shift, W1, b1, W2, b2]; finally the head (W, b).
/// Matrices are row-major with shape (fan_in, fan_out).
struct ParameterLayout {
  std::vector<TensorSlot> slots;
  std::size_t proj_w = 0, proj_b = 0, head_w = 0, head_b = 0;
  std::vector<BlockSlots> edge_blocks;
  std::vector<BlockSlots> node_blocks;
  std::size_t total = 0;

  static ParameterLayout build(ModelKind kind, const ModelDims& dims);
  bool operator==(const ParameterLayout&) const = default;
};

/// Closed-form parameter count:
///   f_in*d + d + T*k*(2*d*h + h + 3*d) + d*C + C,
/// with k = 2 for MultiSetMixer (hyperedge and node block) and k = 1 for the
/// MLP baselines.
std::size_t parameter_count(ModelKind kind, const ModelDims& dims);

/// Network parameters plus the architecture that interprets them.
struct Model {
  ModelKind kind = ModelKind::kMultiSetMixer;
  ModelDims dims;
  double dropout = 0.0;  // MLP CB per-hyperedge hidden-unit dropout rate
  ParameterLayout layout;
  std::vector<double> params;

  std::span<const double> tensor(const std::string& name) const;
  bool operator==(const Model& other) const = default;
};

/// Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)) drawn from the
/// seeded stream in layout order; LN scale 1, shift 0.
Model init_model(ModelKind kind, const ModelDims& dims, std::uint64_t seed, double dropout = 0.0);

/// Final states of a MultiSetMixer / MLP CB pass: one vector per sampled
/// (node, hyperedge) incidence and one per hyperedge.
struct RepresentationState {
  std::vector<NodeId> incidence_node;
  std::vector<EdgeId> incidence_edge;
  Matrix incidence_states;  // one row per incidence
  std::vector<EdgeId> edge_ids;
  Matrix edge_states;  // one row per hyperedge (MultiSetMixer only)
  /// Pooled node states after every layer, when requested.
  std::vector<Matrix> pooled_per_layer;
};

struct ForwardOptions {
  bool training = false;
  std::uint64_t dropout_seed = 0;
  bool keep_intermediate = false;
};

struct ForwardCache;

struct ForwardResult {
  Matrix logits;  // num_nodes x C
  /// True for nodes read out from at least one incidence of this pass.
  std::vector<bool> covered;
  RepresentationState state;
  std::shared_ptr<const ForwardCache> cache;
};

/// Forward pass. With a MiniBatch, means and the readout use only its
/// mask-true incidences. Nodes without incidences read out their projected
/// input features (MultiSetMixer) or the node-level MLP (MLP CB). Reductions
/// run in a canonical order (hyperedges sorted by content, members
/// ascending), so the storage order of nodes and hyperedges does not affect
/// the result. Throws InvalidArgument on a dimension mismatch.
ForwardResult forward(const Model& model, const Hypergraph& h, const FeatureMatrix& x,
                      const MiniBatch* batch = nullptr, const ForwardOptions& opts = {});

/// Reverse-mode pass: gradient of sum(dlogits .* logits) w.r.t. parameters.
std::vector<double> backward(const Model& model, const ForwardResult& fwd, const Matrix& dlogits);

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Mean softmax cross-entropy over nodes with mask[v] != 0 plus
/// 0.5 * weight_decay * |params|^2, and its gradient.
LossAndGrad loss_and_grad(const Model& model, const ForwardResult& fwd, const LabelAssignment& labels,
                          std::span<const std::uint8_t> mask, double weight_decay = 0.0);

/// Per-node MLP in residual form: x <- x + MLP(LN(x)) per layer, then the head.
Matrix mlp_baseline_forward(const Model& model, const FeatureMatrix& x);

/// Argmax accuracy in percent over mask; ties go to the lowest class id.
double accuracy(const Matrix& logits, const LabelAssignment& labels,
                std::span<const std::uint8_t> mask);
double evaluate(const Model& model, const Hypergraph& h, const FeatureMatrix& x,
                const LabelAssignment& labels, std::span<const std::uint8_t> mask);

/// Flat binary checkpoint: magic "HMPCKPT1", u32 version, u32 kind,
/// u64 f_in, d, hidden, T, C, f64 dropout, u64 parameter count, then the
/// parameters as little-endian f64 in layout order.
void save_checkpoint(const std::filesystem::path& path, const Model& model);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace hypermp
