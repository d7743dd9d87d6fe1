#include "hypermp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypermp/error.hpp"
#include "hypermp/rng.hpp"

namespace hypermp {

namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

using ConstMap = Eigen::Map<const Matrix>;
using MutMap = Eigen::Map<Matrix>;
using RowVec = Eigen::Matrix<double, 1, Eigen::Dynamic>;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); }
double gelu_grad(double x) {
  return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) + x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

struct BlockCache {
  Matrix xhat;
  Eigen::VectorXd inv_std;
  Matrix normed;
  Matrix pre;
  Matrix act;
  Matrix drop;  // empty when no dropout
};

// y = W2 * GELU(W1 * LN(x) + b1) + b2, row-wise.
Matrix block_forward(const Model& m, const BlockSlots& s, const Matrix& x, BlockCache& c,
                     const Matrix* drop) {
  const auto d = m.dims.width;
  const auto h = m.dims.mlp_hidden;
  const double* p = m.params.data();
  Eigen::Map<const RowVec> gamma(p + s.ln_scale, d);
  Eigen::Map<const RowVec> beta(p + s.ln_shift, d);
  ConstMap w1(p + s.w1, d, h);
  Eigen::Map<const RowVec> b1(p + s.b1, h);
  ConstMap w2(p + s.w2, h, d);
  Eigen::Map<const RowVec> b2(p + s.b2, d);

  const auto rows = x.rows();
  c.xhat.resize(rows, d);
  c.inv_std.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double mean = x.row(r).mean();
    auto centered = (x.row(r).array() - mean).matrix();
    double var = centered.squaredNorm() / static_cast<double>(d);
    double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    c.inv_std(r) = inv;
    c.xhat.row(r) = centered * inv;
  }
  c.normed = (c.xhat.array().rowwise() * gamma.array()).rowwise() + beta.array();
  c.pre = (c.normed * w1).rowwise() + b1;
  c.act = c.pre.unaryExpr([](double v) { return gelu(v); });
  if (drop) {
    c.drop = *drop;
    c.act.array() *= c.drop.array();
  } else {
    c.drop.resize(0, 0);
  }
  return (c.act * w2).rowwise() + b2;
}

Matrix block_backward(const Model& m, const BlockSlots& s, const BlockCache& c, const Matrix& dy,
                      std::vector<double>& grad) {
  const auto d = m.dims.width;
  const auto h = m.dims.mlp_hidden;
  const double* p = m.params.data();
  double* g = grad.data();
  Eigen::Map<const RowVec> gamma(p + s.ln_scale, d);
  ConstMap w1(p + s.w1, d, h);
  ConstMap w2(p + s.w2, h, d);

  MutMap(g + s.w2, h, d).noalias() += c.act.transpose() * dy;
  Eigen::Map<RowVec>(g + s.b2, d) += dy.colwise().sum();
  Matrix dact = dy * w2.transpose();
  if (c.drop.size() > 0) dact.array() *= c.drop.array();
  Matrix dpre = dact.array() * c.pre.unaryExpr([](double v) { return gelu_grad(v); }).array();
  MutMap(g + s.w1, d, h).noalias() += c.normed.transpose() * dpre;
  Eigen::Map<RowVec>(g + s.b1, h) += dpre.colwise().sum();
  Matrix dnormed = dpre * w1.transpose();
  Eigen::Map<RowVec>(g + s.ln_scale, d) += (dnormed.array() * c.xhat.array()).colwise().sum().matrix();
  Eigen::Map<RowVec>(g + s.ln_shift, d) += dnormed.colwise().sum();

  Matrix dxhat = dnormed.array().rowwise() * gamma.array();
  Matrix dx(dy.rows(), d);
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    double mean_d = dxhat.row(r).mean();
    double mean_dx = dxhat.row(r).dot(c.xhat.row(r)) / static_cast<double>(d);
    dx.row(r) = c.inv_std(r) *
                (dxhat.row(r).array() - mean_d - c.xhat.row(r).array() * mean_dx).matrix();
  }
  return dx;
}

void check_dims(const Model& m, const Hypergraph& h, const FeatureMatrix& x) {
  if (x.rows != h.num_nodes()) {
    throw InvalidArgument("feature rows (" + std::to_string(x.rows) + ") != num_nodes (" +
                          std::to_string(h.num_nodes()) + ")");
  }
  if (x.cols != m.dims.in_features) {
    throw InvalidArgument("feature width " + std::to_string(x.cols) + " != model input width " +
                          std::to_string(m.dims.in_features));
  }
  if (m.params.size() != m.layout.total) throw InvalidArgument("parameter vector size mismatch");
}

Matrix to_matrix(const FeatureMatrix& x) {
  return ConstMap(x.values.data(), static_cast<Eigen::Index>(x.rows), static_cast<Eigen::Index>(x.cols));
}

}  // namespace

struct ForwardCache {
  ModelKind kind{};
  Matrix input;      // n x f_in
  Matrix projected;  // n x d

  // Incidence path, groups stored contiguously in canonical order.
  std::vector<NodeId> inc_node;
  std::vector<std::size_t> inc_group;
  std::vector<std::size_t> group_offset;  // size groups + 1
  std::vector<EdgeId> group_edge;
  std::vector<double> node_incidences;    // per node

  struct Layer {
    BlockCache edge;
    BlockCache node;
  };
  std::vector<Layer> layers;

  // Node-level residual path for the nodes listed in node_rows.
  std::vector<NodeId> node_rows;
  std::vector<BlockCache> node_level;

  Matrix readout;  // n x d
  std::vector<bool> covered;
};

std::optional<ModelKind> parse_model_kind(const std::string& name) {
  if (name == "multisetmixer") return ModelKind::kMultiSetMixer;
  if (name == "mlp") return ModelKind::kMlp;
  if (name == "mlpcb") return ModelKind::kMlpCb;
  return std::nullopt;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMultiSetMixer: return "multisetmixer";
    case ModelKind::kMlp: return "mlp";
    case ModelKind::kMlpCb: return "mlpcb";
  }
  return "unknown";
}

ParameterLayout ParameterLayout::build(ModelKind kind, const ModelDims& dims) {
  ParameterLayout layout;
  auto add = [&](std::string name, std::size_t rows, std::size_t cols) {
    TensorSlot slot{std::move(name), layout.total, rows, cols};
    layout.total += slot.size();
    layout.slots.push_back(slot);
    return slot.offset;
  };
  auto add_block = [&](const std::string& prefix) {
    BlockSlots b{};
    b.ln_scale = add(prefix + ".ln_scale", 1, dims.width);
    b.ln_shift = add(prefix + ".ln_shift", 1, dims.width);
    b.w1 = add(prefix + ".w1", dims.width, dims.mlp_hidden);
    b.b1 = add(prefix + ".b1", 1, dims.mlp_hidden);
    b.w2 = add(prefix + ".w2", dims.mlp_hidden, dims.width);
    b.b2 = add(prefix + ".b2", 1, dims.width);
    return b;
  };
  layout.proj_w = add("proj.w", dims.in_features, dims.width);
  layout.proj_b = add("proj.b", 1, dims.width);
  for (std::size_t l = 0; l < dims.layers; ++l) {
    auto prefix = "layer" + std::to_string(l);
    if (kind == ModelKind::kMultiSetMixer) layout.edge_blocks.push_back(add_block(prefix + ".edge"));
    layout.node_blocks.push_back(add_block(prefix + ".node"));
  }
  layout.head_w = add("head.w", dims.width, dims.classes);
  layout.head_b = add("head.b", 1, dims.classes);
  return layout;
}

std::size_t parameter_count(ModelKind kind, const ModelDims& dims) {
  const auto d = dims.width, h = dims.mlp_hidden;
  const std::size_t blocks = kind == ModelKind::kMultiSetMixer ? 2 : 1;
  return dims.in_features * d + d + dims.layers * blocks * (2 * d * h + h + 3 * d) +
         d * dims.classes + dims.classes;
}

std::span<const double> Model::tensor(const std::string& name) const {
  for (const auto& s : layout.slots) {
    if (s.name == name) return {params.data() + s.offset, s.size()};
  }
  throw InvalidArgument("no parameter tensor named " + name);
}

Model init_model(ModelKind kind, const ModelDims& dims, std::uint64_t seed, double dropout) {
  if (dims.in_features == 0 || dims.width == 0 || dims.mlp_hidden == 0 || dims.classes == 0) {
    throw InvalidArgument("model dimensions must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw InvalidArgument("dropout must lie in [0, 1)");
  Model m;
  m.kind = kind;
  m.dims = dims;
  m.dropout = dropout;
  m.layout = ParameterLayout::build(kind, dims);
  m.params.assign(m.layout.total, 0.0);
  Rng rng(seed);
  for (const auto& slot : m.layout.slots) {
    auto begin = m.params.begin() + static_cast<std::ptrdiff_t>(slot.offset);
    if (slot.name.ends_with(".ln_scale")) {
      std::fill_n(begin, slot.size(), 1.0);
      continue;
    }
    if (slot.name.ends_with(".ln_shift")) continue;
    // Biases share the fan-in of the matrix that precedes them.
    std::size_t fan_in = slot.rows;
    const bool bias = slot.name.ends_with(".b") || slot.name.ends_with(".b1") || slot.name.ends_with(".b2");
    if (bias) {
      const auto& prev = m.layout.slots[static_cast<std::size_t>(&slot - m.layout.slots.data()) - 1];
      fan_in = prev.rows;
    }
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < slot.size(); ++i) {
      begin[static_cast<std::ptrdiff_t>(i)] = (2.0 * rng.uniform() - 1.0) * bound;
    }
  }
  return m;
}

ForwardResult forward(const Model& m, const Hypergraph& h, const FeatureMatrix& x,
                      const MiniBatch* batch, const ForwardOptions& opts) {
  check_dims(m, h, x);
  const auto n = h.num_nodes();
  const auto d = static_cast<Eigen::Index>(m.dims.width);
  const double* p = m.params.data();
  auto cache = std::make_shared<ForwardCache>();
  auto& c = *cache;
  c.kind = m.kind;
  c.input = to_matrix(x);
  c.projected = (c.input * ConstMap(p + m.layout.proj_w, x.cols, m.dims.width)).rowwise() +
                Eigen::Map<const RowVec>(p + m.layout.proj_b, d);

  const bool use_incidences =
      m.kind == ModelKind::kMultiSetMixer || (m.kind == ModelKind::kMlpCb && opts.training);

  ForwardResult out;
  c.covered.assign(n, false);
  c.readout = Matrix::Zero(static_cast<Eigen::Index>(n), d);
  Matrix states;
  Matrix edge_states;

  if (use_incidences) {
    // Canonical groups: member lists sorted, groups ordered by content.
    std::vector<std::vector<NodeId>> groups;
    std::vector<EdgeId> group_edge;
    if (batch) {
      for (std::size_t i = 0; i < batch->rows(); ++i) {
        std::vector<NodeId> members;
        auto row = batch->row(i);
        auto mask = batch->row_mask(i);
        for (std::size_t j = 0; j < batch->width; ++j) {
          if (!mask[j]) continue;
          if (row[j] >= n) throw InvalidArgument("mini-batch node id out of range");
          members.push_back(row[j]);
        }
        if (members.empty()) continue;
        std::sort(members.begin(), members.end());
        groups.push_back(std::move(members));
        group_edge.push_back(batch->edge_ids[i]);
      }
    } else {
      for (EdgeId e = 0; e < h.num_edges(); ++e) {
        auto members = h.edge(e);
        groups.emplace_back(members.begin(), members.end());
        group_edge.push_back(e);
      }
    }
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return groups[a] < groups[b]; });

    c.group_offset.assign(1, 0);
    c.node_incidences.assign(n, 0.0);
    for (std::size_t gi = 0; gi < order.size(); ++gi) {
      const auto& members = groups[order[gi]];
      c.group_edge.push_back(group_edge[order[gi]]);
      for (NodeId v : members) {
        c.inc_node.push_back(v);
        c.inc_group.push_back(gi);
        c.node_incidences[v] += 1.0;
      }
      c.group_offset.push_back(c.inc_node.size());
    }
    const auto num_inc = static_cast<Eigen::Index>(c.inc_node.size());
    const auto num_groups = static_cast<Eigen::Index>(c.group_edge.size());

    states.resize(num_inc, d);
    for (Eigen::Index i = 0; i < num_inc; ++i) states.row(i) = c.projected.row(c.inc_node[i]);

    c.layers.resize(m.dims.layers);
    for (std::size_t l = 0; l < m.dims.layers; ++l) {
      auto& lc = c.layers[l];
      Matrix update;
      if (m.kind == ModelKind::kMultiSetMixer) {
        Matrix means = Matrix::Zero(num_groups, d);
        for (Eigen::Index g = 0; g < num_groups; ++g) {
          for (auto i = c.group_offset[g]; i < c.group_offset[g + 1]; ++i) {
            means.row(g) += states.row(static_cast<Eigen::Index>(i));
          }
          means.row(g) /= static_cast<double>(c.group_offset[g + 1] - c.group_offset[g]);
        }
        edge_states = means + block_forward(m, m.layout.edge_blocks[l], means, lc.edge, nullptr);
        update = block_forward(m, m.layout.node_blocks[l], states, lc.node, nullptr);
        for (Eigen::Index i = 0; i < num_inc; ++i) {
          update.row(i) += edge_states.row(static_cast<Eigen::Index>(c.inc_group[i]));
        }
      } else {
        Matrix drop;
        const Matrix* drop_ptr = nullptr;
        if (m.dropout > 0.0) {
          const auto hidden = static_cast<Eigen::Index>(m.dims.mlp_hidden);
          drop.resize(num_inc, hidden);
          const double keep_scale = 1.0 / (1.0 - m.dropout);
          for (Eigen::Index g = 0; g < num_groups; ++g) {
            Rng rng(derive_seed(derive_seed(opts.dropout_seed, l), c.group_edge[g]));
            RowVec mask(hidden);
            for (Eigen::Index k = 0; k < hidden; ++k) {
              mask(k) = rng.uniform() < m.dropout ? 0.0 : keep_scale;
            }
            for (auto i = c.group_offset[g]; i < c.group_offset[g + 1]; ++i) {
              drop.row(static_cast<Eigen::Index>(i)) = mask;
            }
          }
          drop_ptr = &drop;
        }
        update = block_forward(m, m.layout.node_blocks[l], states, lc.node, drop_ptr);
      }
      states += update;
      if (opts.keep_intermediate) {
        Matrix pooled = Matrix::Zero(static_cast<Eigen::Index>(n), d);
        for (Eigen::Index i = 0; i < num_inc; ++i) pooled.row(c.inc_node[i]) += states.row(i);
        for (NodeId v = 0; v < n; ++v) {
          if (c.node_incidences[v] > 0) pooled.row(v) /= c.node_incidences[v];
        }
        out.state.pooled_per_layer.push_back(std::move(pooled));
      }
    }

    for (Eigen::Index i = 0; i < num_inc; ++i) c.readout.row(c.inc_node[i]) += states.row(i);
    for (NodeId v = 0; v < n; ++v) {
      if (c.node_incidences[v] > 0) {
        c.readout.row(v) /= c.node_incidences[v];
        c.covered[v] = true;
      }
    }
  }

  // Node-level path: every node for MLP and evaluation-mode MLP CB, the
  // uncovered ones for training-mode MLP CB, none for MultiSetMixer.
  if (m.kind != ModelKind::kMultiSetMixer) {
    for (NodeId v = 0; v < n; ++v) {
      if (!c.covered[v]) c.node_rows.push_back(v);
    }
    Matrix hstate(static_cast<Eigen::Index>(c.node_rows.size()), d);
    for (std::size_t r = 0; r < c.node_rows.size(); ++r) {
      hstate.row(static_cast<Eigen::Index>(r)) = c.projected.row(c.node_rows[r]);
    }
    c.node_level.resize(m.dims.layers);
    for (std::size_t l = 0; l < m.dims.layers; ++l) {
      hstate += block_forward(m, m.layout.node_blocks[l], hstate, c.node_level[l], nullptr);
    }
    for (std::size_t r = 0; r < c.node_rows.size(); ++r) {
      c.readout.row(c.node_rows[r]) = hstate.row(static_cast<Eigen::Index>(r));
    }
  } else {
    for (NodeId v = 0; v < n; ++v) {
      if (!c.covered[v]) c.readout.row(v) = c.projected.row(v);
    }
  }

  out.logits = (c.readout * ConstMap(p + m.layout.head_w, m.dims.width, m.dims.classes)).rowwise() +
               Eigen::Map<const RowVec>(p + m.layout.head_b, m.dims.classes);
  out.covered = c.covered;
  out.state.incidence_node = c.inc_node;
  out.state.incidence_edge.reserve(c.inc_node.size());
  for (auto g : c.inc_group) out.state.incidence_edge.push_back(c.group_edge[g]);
  out.state.incidence_states = std::move(states);
  out.state.edge_ids = c.group_edge;
  out.state.edge_states = std::move(edge_states);
  out.cache = std::move(cache);
  return out;
}

std::vector<double> backward(const Model& m, const ForwardResult& fwd, const Matrix& dlogits) {
  const auto& c = *fwd.cache;
  const double* p = m.params.data();
  std::vector<double> grad(m.params.size(), 0.0);
  double* g = grad.data();
  const auto d = static_cast<Eigen::Index>(m.dims.width);
  const auto n = c.readout.rows();

  MutMap(g + m.layout.head_w, d, m.dims.classes).noalias() += c.readout.transpose() * dlogits;
  Eigen::Map<RowVec>(g + m.layout.head_b, m.dims.classes) += dlogits.colwise().sum();
  Matrix dreadout = dlogits * ConstMap(p + m.layout.head_w, d, m.dims.classes).transpose();
  Matrix dproj = Matrix::Zero(n, d);

  if (m.kind == ModelKind::kMultiSetMixer) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (!c.covered[static_cast<std::size_t>(v)]) dproj.row(v) += dreadout.row(v);
    }
  } else if (!c.node_rows.empty()) {
    const auto rows = static_cast<Eigen::Index>(c.node_rows.size());
    Matrix dh(rows, d);
    for (Eigen::Index r = 0; r < rows; ++r) dh.row(r) = dreadout.row(c.node_rows[r]);
    for (std::size_t l = m.dims.layers; l-- > 0;) {
      dh += block_backward(m, m.layout.node_blocks[l], c.node_level[l], dh, grad);
    }
    for (Eigen::Index r = 0; r < rows; ++r) dproj.row(c.node_rows[r]) += dh.row(r);
  }

  if (!c.inc_node.empty()) {
    const auto num_inc = static_cast<Eigen::Index>(c.inc_node.size());
    const auto num_groups = static_cast<Eigen::Index>(c.group_edge.size());
    Matrix dstates(num_inc, d);
    for (Eigen::Index i = 0; i < num_inc; ++i) {
      dstates.row(i) = dreadout.row(c.inc_node[i]) / c.node_incidences[c.inc_node[i]];
    }
    for (std::size_t l = m.dims.layers; l-- > 0;) {
      const auto& lc = c.layers[l];
      Matrix dnext = dstates;
      dstates += block_backward(m, m.layout.node_blocks[l], lc.node, dnext, grad);
      if (m.kind == ModelKind::kMultiSetMixer) {
        Matrix dz = Matrix::Zero(num_groups, d);
        for (Eigen::Index i = 0; i < num_inc; ++i) {
          dz.row(static_cast<Eigen::Index>(c.inc_group[i])) += dnext.row(i);
        }
        Matrix dmeans = dz + block_backward(m, m.layout.edge_blocks[l], lc.edge, dz, grad);
        for (Eigen::Index gi = 0; gi < num_groups; ++gi) {
          double size = static_cast<double>(c.group_offset[gi + 1] - c.group_offset[gi]);
          RowVec share = dmeans.row(gi) / size;
          for (auto i = c.group_offset[gi]; i < c.group_offset[gi + 1]; ++i) {
            dstates.row(static_cast<Eigen::Index>(i)) += share;
          }
        }
      }
    }
    for (Eigen::Index i = 0; i < num_inc; ++i) dproj.row(c.inc_node[i]) += dstates.row(i);
  }

  MutMap(g + m.layout.proj_w, m.dims.in_features, d).noalias() += c.input.transpose() * dproj;
  Eigen::Map<RowVec>(g + m.layout.proj_b, d) += dproj.colwise().sum();
  return grad;
}

LossAndGrad loss_and_grad(const Model& m, const ForwardResult& fwd, const LabelAssignment& labels,
                          std::span<const std::uint8_t> mask, double weight_decay) {
  const auto& logits = fwd.logits;
  const auto n = logits.rows();
  if (static_cast<std::size_t>(n) != mask.size() || labels.size() != mask.size()) {
    throw InvalidArgument("mask / label length does not match the number of nodes");
  }
  std::size_t count = 0;
  for (auto b : mask) count += b ? 1 : 0;
  if (count == 0) throw InvalidArgument("training mask is empty");

  LossAndGrad out;
  Matrix dlogits = Matrix::Zero(n, logits.cols());
  const double scale = 1.0 / static_cast<double>(count);
  for (Eigen::Index v = 0; v < n; ++v) {
    if (!mask[static_cast<std::size_t>(v)]) continue;
    double mx = logits.row(v).maxCoeff();
    RowVec e = (logits.row(v).array() - mx).exp().matrix();
    double z = e.sum();
    auto y = static_cast<Eigen::Index>(labels[static_cast<NodeId>(v)]);
    out.loss += (std::log(z) + mx - logits(v, y)) * scale;
    dlogits.row(v) = e / z * scale;
    dlogits(v, y) -= scale;
  }
  out.grad = backward(m, fwd, dlogits);
  if (weight_decay > 0.0) {
    double sq = 0.0;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      sq += m.params[i] * m.params[i];
      out.grad[i] += weight_decay * m.params[i];
    }
    out.loss += 0.5 * weight_decay * sq;
  }
  return out;
}

Matrix mlp_baseline_forward(const Model& m, const FeatureMatrix& x) {
  if (m.kind == ModelKind::kMultiSetMixer) {
    throw InvalidArgument("mlp_baseline_forward needs an MLP or MLP CB parameter set");
  }
  if (x.cols != m.dims.in_features) throw InvalidArgument("feature width mismatch");
  Hypergraph empty(x.rows, {});
  return forward(m, empty, x, nullptr, {}).logits;
}

double accuracy(const Matrix& logits, const LabelAssignment& labels, std::span<const std::uint8_t> mask) {
  std::size_t total = 0, correct = 0;
  for (Eigen::Index v = 0; v < logits.rows(); ++v) {
    if (!mask[static_cast<std::size_t>(v)]) continue;
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < logits.cols(); ++k) {
      if (logits(v, k) > logits(v, best)) best = k;
    }
    ++total;
    correct += static_cast<ClassId>(best) == labels[static_cast<NodeId>(v)] ? 1 : 0;
  }
  if (total == 0) throw InvalidArgument("evaluation mask is empty");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

double evaluate(const Model& m, const Hypergraph& h, const FeatureMatrix& x, const LabelAssignment& labels,
                std::span<const std::uint8_t> mask) {
  return accuracy(forward(m, h, x, nullptr, {}).logits, labels, mask);
}

}  // namespace hypermp
