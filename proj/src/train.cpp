#include "hypermp/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hypermp/rng.hpp"

namespace hypermp {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (weight_decay < 0.0) throw InvalidArgument("weight decay must be >= 0");
}

void Split::validate(std::size_t num_nodes) const {
  if (train.size() != num_nodes || val.size() != num_nodes || test.size() != num_nodes) {
    throw InvalidArgument("split masks must have one entry per node");
  }
  bool any_train = false;
  for (std::size_t v = 0; v < num_nodes; ++v) {
    if ((train[v] != 0) + (val[v] != 0) + (test[v] != 0) > 1) {
      throw InvalidArgument("split masks overlap at node " + std::to_string(v));
    }
    any_train = any_train || train[v];
  }
  if (!any_train) throw InvalidArgument("training mask is empty");
}

Split random_split(std::size_t num_nodes, double train_fraction, double val_fraction,
                   std::uint64_t seed) {
  if (train_fraction < 0.0 || val_fraction < 0.0 || train_fraction + val_fraction > 1.0) {
    throw InvalidArgument("split fractions must be non-negative and sum to at most 1");
  }
  std::vector<std::size_t> order(num_nodes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(num_nodes)));
  auto n_val = static_cast<std::size_t>(std::floor(val_fraction * static_cast<double>(num_nodes)));
  Split s;
  s.train.assign(num_nodes, 0);
  s.val.assign(num_nodes, 0);
  s.test.assign(num_nodes, 0);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    auto v = order[i];
    if (i < n_train) s.train[v] = 1;
    else if (i < n_train + n_val) s.val[v] = 1;
    else s.test[v] = 1;
  }
  return s;
}

TrainingDiverged::TrainingDiverged(std::size_t epoch, double loss)
    : Error("training diverged at epoch " + std::to_string(epoch) + " (loss " + std::to_string(loss) + ")"),
      epoch_(epoch) {}

Optimizer::Optimizer(const TrainConfig& cfg, std::size_t num_params) : cfg_(cfg) {
  if (cfg_.optimizer == OptimizerKind::kAdam) {
    m_.assign(num_params, 0.0);
    v_.assign(num_params, 0.0);
  }
}

void Optimizer::step(std::vector<double>& params, const std::vector<double>& grad) {
  ++t_;
  const double lr = cfg_.learning_rate;
  if (cfg_.optimizer == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
    return;
  }
  const double b1 = cfg_.beta1, b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
    params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.epsilon);
  }
}

TrainReport train(Model& model, const Hypergraph& h, const FeatureMatrix& x,
                  const LabelAssignment& labels, const Split& split, const TrainConfig& cfg) {
  cfg.validate();
  split.validate(h.num_nodes());
  labels.validate(h.num_nodes());

  std::optional<MiniBatchSampler> sampler;
  if (cfg.sampler) {
    SamplerConfig sc = *cfg.sampler;
    sc.seed = derive_seed(cfg.seed, sc.seed);
    sampler.emplace(h, std::move(sc));
  }

  Optimizer opt(cfg, model.params.size());
  TrainReport report;
  bool have_val = std::any_of(split.val.begin(), split.val.end(), [](auto b) { return b != 0; });
  std::vector<double> best_params = model.params;
  double best_val = -1.0;
  std::uint64_t step_index = 0;
  std::vector<std::uint8_t> step_mask(h.num_nodes());

  auto run_step = [&](const MiniBatch* batch) -> std::optional<double> {
    ForwardOptions fo{true, derive_seed(cfg.seed, 0x5EED0000ULL + step_index++), false};
    auto fwd = forward(model, h, x, batch, fo);
    bool any = false;
    for (NodeId v = 0; v < h.num_nodes(); ++v) {
      bool use = split.train[v] != 0;
      if (batch && model.kind != ModelKind::kMlp) use = use && (fwd.covered[v] || h.is_isolated(v));
      step_mask[v] = use ? 1 : 0;
      any = any || use;
    }
    if (!any) return std::nullopt;
    auto lg = loss_and_grad(model, fwd, labels, step_mask, cfg.weight_decay);
    if (!std::isfinite(lg.loss)) return lg.loss;
    opt.step(model.params, lg.grad);
    return lg.loss;
  };

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t steps = 0;
    auto record = [&](std::optional<double> loss) {
      if (!loss) return;
      if (!std::isfinite(*loss)) throw TrainingDiverged(epoch, *loss);
      loss_sum += *loss;
      ++steps;
    };
    if (sampler) {
      for (const auto& batch : sampler->epoch()) record(run_step(&batch));
    } else {
      record(run_step(nullptr));
    }
    report.loss_curve.push_back(steps ? loss_sum / static_cast<double>(steps) : 0.0);

    auto logits = forward(model, h, x, nullptr, {}).logits;
    double train_acc = accuracy(logits, labels, split.train);
    double val_acc = have_val ? accuracy(logits, labels, split.val) : 0.0;
    report.train_accuracy_curve.push_back(train_acc);
    report.val_accuracy_curve.push_back(val_acc);
    if (!have_val || val_acc > best_val) {
      best_val = val_acc;
      best_params = model.params;
      report.best_epoch = epoch;
      report.best_val_accuracy = val_acc;
      report.train_accuracy = train_acc;
    }
  }

  model.params = std::move(best_params);
  bool have_test = std::any_of(split.test.begin(), split.test.end(), [](auto b) { return b != 0; });
  if (have_test) report.test_accuracy = evaluate(model, h, x, labels, split.test);
  return report;
}

}  // namespace hypermp
