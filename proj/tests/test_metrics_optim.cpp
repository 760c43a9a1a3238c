// Copyright 2026 The ttrnn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "ttrnn/metrics.hpp"
#include "ttrnn/optim.hpp"

namespace ttrnn {
namespace {

TEST(Metrics, HandExampleFromCounts) {
  ConfusionCounts counts;
  counts.per_class = {ClassCounts{6, 2, 3, 0}};
  counts.total = 11;
  EXPECT_DOUBLE_EQ(precision(counts, 0), 0.75);
  EXPECT_NEAR(recall(counts, 0), 0.666667, 1e-6);
  EXPECT_NEAR(f1(precision(counts, 0), recall(counts, 0)), 0.705882, 1e-6);
  EXPECT_NEAR(f1_from_counts(counts.per_class[0]), 12.0 / 17.0, 1e-15);
  EXPECT_DOUBLE_EQ(f1(0.4, 0.4), 0.4);
  EXPECT_EQ(f1(0.0, 0.0), 0.0);
  counts.per_class = {ClassCounts{0, 0, 5, 5}};
  EXPECT_EQ(precision(counts, 0), 0.0);
  EXPECT_EQ(recall(counts, 0), 0.0);
  EXPECT_EQ(f1_from_counts(counts.per_class[0]), 0.0);
}

TEST(Metrics, PerfectPredictions) {
  const std::vector<std::size_t> labels{0, 1, 2, 2, 1, 0};
  const MetricsReport r = compute_metrics(labels, labels, 3);
  EXPECT_EQ(r.macro_f1, 1.0);
  EXPECT_EQ(r.micro_f1, 1.0);
  EXPECT_EQ(r.accuracy, 1.0);
}

TEST(Metrics, AllOneClassOnBalancedSet) {
  const std::vector<std::size_t> labels{0, 1, 2, 0, 1, 2};
  const std::vector<std::size_t> preds(6, 0);
  const MetricsReport r = compute_metrics(labels, preds, 3);
  EXPECT_NEAR(r.accuracy, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.per_class[0].f1, 0.5, 1e-15);
  EXPECT_EQ(r.per_class[1].f1, 0.0);
  EXPECT_NEAR(r.macro_f1, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.micro_f1, 1.0 / 3.0, 1e-15);
}

TEST(Metrics, MacroSkipsAbsentClasses) {
  const std::vector<std::size_t> labels{0, 1, 1};
  const std::vector<std::size_t> preds{0, 1, 0};
  // Class 2..5 never appear, so only classes 0 and 1 are averaged.
  const MetricsReport r = compute_metrics(labels, preds, 6);
  EXPECT_NEAR(r.macro_f1, (2.0 / 3.0 + 2.0 / 3.0) / 2.0, 1e-15);
}

TEST(Metrics, Errors) {
  const std::vector<std::size_t> a{0, 1}, b{0}, bad{0, 3}, empty;
  EXPECT_ERROR_CODE(compute_metrics(a, b, 2), ErrorCode::kShapeMismatch);
  EXPECT_ERROR_CODE(compute_metrics(a, bad, 2), ErrorCode::kLabelOutOfRange);
  EXPECT_ERROR_CODE(compute_metrics(empty, empty, 2), ErrorCode::kEmptyTestSet);
}

TEST(Metrics, BruteForceOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t C = 2 + trial % 5;
    std::uniform_int_distribution<std::size_t> cls(0, C - 1);
    std::vector<std::size_t> labels(1000), preds(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
      labels[i] = cls(rng);
      preds[i] = (rng() % 3 == 0) ? labels[i] : cls(rng);
    }
    const MetricsReport r = compute_metrics(labels, preds, C, 0.5);
    std::uint64_t correct = 0;
    double macro_sum = 0.0;
    std::size_t present = 0;
    std::uint64_t tp_all = 0, fp_all = 0, fn_all = 0;
    for (std::size_t c = 0; c < C; ++c) {
      std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
      for (std::size_t i = 0; i < 1000; ++i) {
        const bool is_label = labels[i] == c, is_pred = preds[i] == c;
        tp += is_label && is_pred;
        fp += !is_label && is_pred;
        fn += is_label && !is_pred;
        tn += !is_label && !is_pred;
      }
      ASSERT_EQ(tp + fp + fn + tn, 1000u);
      correct += tp;
      tp_all += tp;
      fp_all += fp;
      fn_all += fn;
      const double p = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
      const double rc = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
      const double f = 2 * tp + fp + fn ? static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn) : 0.0;
      EXPECT_EQ(r.per_class[c].precision, p);
      EXPECT_EQ(r.per_class[c].recall, rc);
      EXPECT_EQ(r.per_class[c].f1, f);
      EXPECT_EQ(r.per_class[c].support, tp + fn);
      if (tp + fp + fn > 0) {
        macro_sum += f;
        ++present;
      }
    }
    EXPECT_EQ(r.accuracy, static_cast<double>(correct) / 1000.0);
    EXPECT_EQ(r.micro_f1, static_cast<double>(2 * tp_all) / static_cast<double>(2 * tp_all + fp_all + fn_all));
    EXPECT_EQ(r.macro_f1, macro_sum / static_cast<double>(present));
    EXPECT_EQ(r.count, 1000u);
    EXPECT_EQ(r.loss, 0.5);
  }
}

ad::Var scalar_param(double w) { return ad::Var::parameter(Tensor::vector({w}), "w"); }

TEST(Optim, SgdIsExact) {
  const ad::Var w = ad::Var::parameter(Tensor::vector({1.0, -2.0}), "w");
  w.mutable_grad() = Tensor::vector({0.5, 0.25});
  const std::vector<ad::Var> vars{w};
  sgd_step(vars, 0.1);
  EXPECT_EQ(w.value(), Tensor::vector({1.0 - 0.1 * 0.5, -2.0 - 0.1 * 0.25}));
}

TEST(Optim, AdamFirstStep) {
  const ad::Var w = ad::Var::parameter(Tensor::vector({1.0, -2.0, 0.3}), "w");
  const std::vector<double> g{0.5, -3.0, 1e-9};
  w.mutable_grad() = Tensor::vector(g);
  Adam adam(0.01);
  const std::vector<ad::Var> vars{w};
  adam.step(vars);
  EXPECT_EQ(adam.steps_taken(), 1u);
  const std::vector<double> start{1.0, -2.0, 0.3};
  for (std::size_t i = 0; i < 3; ++i) {
    // m_hat = g, v_hat = g^2 at t = 1.
    const double expected = start[i] - 0.01 * g[i] / (std::abs(g[i]) + 1e-8);
    EXPECT_NEAR(w.value()[i], expected, 1e-12);
  }
}

TEST(Optim, ZeroGradientLeavesParameters) {
  for (OptimizerKind kind : {OptimizerKind::kSgd, OptimizerKind::kAdam}) {
    const ad::Var w = ad::Var::parameter(Tensor::vector({0.7, -0.1}), "w");
    Optimizer opt(kind, 0.1);
    const std::vector<ad::Var> vars{w};
    for (int i = 0; i < 3; ++i) opt.step(vars);
    EXPECT_EQ(w.value(), Tensor::vector({0.7, -0.1}));
  }
}

TEST(Optim, QuadraticDecreases) {
  for (OptimizerKind kind : {OptimizerKind::kSgd, OptimizerKind::kAdam}) {
    const ad::Var w = scalar_param(1.5);
    Optimizer opt(kind, 0.01);
    const std::vector<ad::Var> vars{w};
    double prev = 1.5 * 1.5;
    for (int i = 0; i < 200; ++i) {
      ad::zero_grads(vars);
      ad::Tape tape;
      const ad::Var sq = tape.hadamard(w, w);
      tape.backward(tape.sum(std::vector<ad::Var>{sq}));
      opt.step(vars);
      const double now = w.value()[0] * w.value()[0];
      ASSERT_LT(now, prev) << optimizer_name(kind) << " step " << i;
      prev = now;
    }
  }
}

TEST(Optim, ClipGradNorm) {
  const ad::Var a = ad::Var::parameter(Tensor::vector({0, 0}), "a");
  const ad::Var b = ad::Var::parameter(Tensor::vector({0}), "b");
  a.mutable_grad() = Tensor::vector({3.0, 0.0});
  b.mutable_grad() = Tensor::vector({4.0});
  const std::vector<ad::Var> vars{a, b};
  EXPECT_DOUBLE_EQ(clip_grad_norm(vars, 10.0), 5.0);
  EXPECT_EQ(b.grad()[0], 4.0);
  EXPECT_DOUBLE_EQ(clip_grad_norm(vars, 1.0), 5.0);
  EXPECT_NEAR(a.grad()[0], 0.6, 1e-15);
  EXPECT_NEAR(b.grad()[0], 0.8, 1e-15);
}

TEST(Optim, Names) {
  EXPECT_EQ(parse_optimizer("adam"), OptimizerKind::kAdam);
  EXPECT_EQ(parse_optimizer(optimizer_name(OptimizerKind::kSgd)), OptimizerKind::kSgd);
  EXPECT_ERROR_CODE(parse_optimizer("rmsprop"), ErrorCode::kConfigError);
}

}  // namespace
}  // namespace ttrnn
