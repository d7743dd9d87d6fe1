#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hypermp/error.hpp"
#include "hypermp/model.hpp"
#include "hypermp/sampler.hpp"

namespace hypermp {

enum class OptimizerKind { kSgd, kAdam };

struct TrainConfig {
  double learning_rate = 0.001;
  double weight_decay = 0.0;
  std::size_t epochs = 200;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  /// When set, every optimizer step consumes one mini-batch of an epoch;
  /// otherwise each epoch is one full-hypergraph step.
  std::optional<SamplerConfig> sampler;

  void validate() const;
};

/// Node masks for one train/validation/test split (1 = member).
struct Split {
  std::vector<std::uint8_t> train;
  std::vector<std::uint8_t> val;
  std::vector<std::uint8_t> test;

  /// Throws InvalidArgument unless the masks have equal length, are
  /// pairwise disjoint, and train is non-empty.
  void validate(std::size_t num_nodes) const;
};

/// Seeded random split with the given train / validation fractions; the
/// remainder is test.
Split random_split(std::size_t num_nodes, double train_fraction, double val_fraction,
                   std::uint64_t seed);

struct TrainReport {
  double best_val_accuracy = 0.0;
  double test_accuracy = 0.0;   // of the best-validation snapshot
  double train_accuracy = 0.0;  // of the best-validation snapshot
  std::size_t best_epoch = 0;   // 1-based
  std::vector<double> loss_curve;  // mean step loss per epoch
  std::vector<double> train_accuracy_curve;
  std::vector<double> val_accuracy_curve;
};

/// Thrown when a step produces a non-finite loss.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(std::size_t epoch, double loss);
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

/// Adam / SGD state for one parameter vector.
class Optimizer {
 public:
  explicit Optimizer(const TrainConfig& cfg, std::size_t num_params);
  void step(std::vector<double>& params, const std::vector<double>& grad);

 private:
  TrainConfig cfg_;
  std::vector<double> m_, v_;
  std::size_t t_ = 0;
};

/// Trains `model` in place for cfg.epochs; on return `model` holds the
/// snapshot with the best validation accuracy (first one on ties). With an
/// empty validation mask the last epoch is kept. Training nodes contribute
/// to a step's loss when the step's mini-batch covers them or they are
/// isolated.
TrainReport train(Model& model, const Hypergraph& h, const FeatureMatrix& x,
                  const LabelAssignment& labels, const Split& split, const TrainConfig& cfg);

}  // namespace hypermp
