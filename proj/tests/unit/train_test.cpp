#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gradcheck.hpp"
#include "hypermp/train.hpp"
#include "test_util.hpp"

using namespace hypermp;

namespace {

Split all_train(std::size_t n) {
  Split s;
  s.train.assign(n, 1);
  s.val.assign(n, 0);
  s.test.assign(n, 0);
  return s;
}

}  // namespace

TEST(Split, FractionsAndDisjointness) {
  auto s = random_split(100, 0.5, 0.25, 3);
  auto count = [](const std::vector<std::uint8_t>& m) { return std::accumulate(m.begin(), m.end(), 0); };
  EXPECT_EQ(count(s.train), 50);
  EXPECT_EQ(count(s.val), 25);
  EXPECT_EQ(count(s.test), 25);
  for (int v = 0; v < 100; ++v) EXPECT_EQ(s.train[v] + s.val[v] + s.test[v], 1);
  EXPECT_NO_THROW(s.validate(100));
  EXPECT_EQ(random_split(100, 0.5, 0.25, 3).train, s.train);
  EXPECT_NE(random_split(100, 0.5, 0.25, 4).train, s.train);
  EXPECT_THROW(random_split(100, 0.8, 0.3, 0), InvalidArgument);
  EXPECT_THROW(random_split(100, -0.1, 0.3, 0), InvalidArgument);

  Split overlap = s;
  overlap.val = overlap.train;
  EXPECT_THROW(overlap.validate(100), InvalidArgument);
  Split empty = s;
  std::fill(empty.train.begin(), empty.train.end(), 0);
  EXPECT_THROW(empty.validate(100), InvalidArgument);
  EXPECT_THROW(s.validate(99), InvalidArgument);
}

TEST(Train, ConfigValidation) {
  auto task = testutil::separable_task(0);
  auto m = init_model(ModelKind::kMultiSetMixer, {3, 4, 4, 1, 3}, 0);
  auto split = all_train(task.h.num_nodes());
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(train(m, task.h, task.x, task.labels, split, cfg), InvalidArgument);
  cfg.epochs = 1;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(train(m, task.h, task.x, task.labels, split, cfg), InvalidArgument);
  cfg.learning_rate = 0.01;
  auto r = train(m, task.h, task.x, task.labels, split, cfg);
  EXPECT_EQ(r.loss_curve.size(), 1u);
  EXPECT_EQ(r.train_accuracy_curve.size(), 1u);
  EXPECT_EQ(r.best_epoch, 1u);
}

TEST(Train, DeterministicForSeed) {
  auto task = testutil::separable_task(1);
  auto split = random_split(task.h.num_nodes(), 0.5, 0.25, 1);
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.learning_rate = 0.01;
  cfg.seed = 9;
  SamplerConfig sc;
  sc.batch_edges = 6;
  sc.nodes_per_edge = 3;
  cfg.sampler = sc;
  for (auto kind : {ModelKind::kMultiSetMixer, ModelKind::kMlpCb}) {
    auto a = init_model(kind, {3, 8, 8, 2, 3}, 4, kind == ModelKind::kMlpCb ? 0.2 : 0.0);
    auto b = a;
    auto ra = train(a, task.h, task.x, task.labels, split, cfg);
    auto rb = train(b, task.h, task.x, task.labels, split, cfg);
    EXPECT_EQ(ra.loss_curve, rb.loss_curve);
    EXPECT_EQ(a.params, b.params);
  }
}

TEST(Train, FullBatchLossDecreasesAtSmallRate) {
  auto task = testutil::separable_task(2);
  auto split = all_train(task.h.num_nodes());
  for (auto opt : {OptimizerKind::kAdam, OptimizerKind::kSgd}) {
    auto m = init_model(ModelKind::kMultiSetMixer, {3, 8, 8, 2, 3}, 1);
    TrainConfig cfg;
    cfg.epochs = 10;
    cfg.learning_rate = 0.001;
    cfg.optimizer = opt;
    auto r = train(m, task.h, task.x, task.labels, split, cfg);
    for (std::size_t i = 1; i < r.loss_curve.size(); ++i) EXPECT_LE(r.loss_curve[i], r.loss_curve[i - 1]);
  }
}

TEST(Train, KeepsBestValidationSnapshot) {
  auto task = testutil::separable_task(3);
  auto split = random_split(task.h.num_nodes(), 0.5, 0.25, 3);
  auto m = init_model(ModelKind::kMultiSetMixer, {3, 8, 8, 2, 3}, 2);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.learning_rate = 0.01;
  auto r = train(m, task.h, task.x, task.labels, split, cfg);
  ASSERT_GE(r.best_epoch, 1u);
  double best = *std::max_element(r.val_accuracy_curve.begin(), r.val_accuracy_curve.end());
  EXPECT_EQ(r.best_val_accuracy, best);
  auto first = std::find(r.val_accuracy_curve.begin(), r.val_accuracy_curve.end(), best);
  EXPECT_EQ(static_cast<std::size_t>(first - r.val_accuracy_curve.begin()) + 1, r.best_epoch);
  auto out = forward(m, task.h, task.x);
  EXPECT_DOUBLE_EQ(accuracy(out.logits, task.labels, split.val), r.best_val_accuracy);
  EXPECT_DOUBLE_EQ(accuracy(out.logits, task.labels, split.test), r.test_accuracy);
}

TEST(Train, DivergenceIsReported) {
  auto task = testutil::separable_task(4);
  auto m = init_model(ModelKind::kMultiSetMixer, {3, 4, 4, 1, 3}, 0);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.optimizer = OptimizerKind::kSgd;
  cfg.learning_rate = 1e200;
  EXPECT_THROW(train(m, task.h, task.x, task.labels, all_train(task.h.num_nodes()), cfg), TrainingDiverged);
}

TEST(Optimizer, SgdAndAdamFirstStep) {
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.optimizer = OptimizerKind::kSgd;
  std::vector<double> p{1.0, -2.0};
  Optimizer sgd(cfg, 2);
  sgd.step(p, {0.5, -1.0});
  EXPECT_DOUBLE_EQ(p[0], 0.95);
  EXPECT_DOUBLE_EQ(p[1], -1.9);

  // the first bias-corrected Adam step moves each coordinate by about lr
  cfg.optimizer = OptimizerKind::kAdam;
  std::vector<double> q{1.0, -2.0};
  Optimizer adam(cfg, 2);
  adam.step(q, {0.5, -1e-3});
  EXPECT_NEAR(q[0], 0.9, 1e-7);
  EXPECT_NEAR(q[1], -1.9, 1e-5);
}
