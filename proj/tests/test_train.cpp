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

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "ttrnn/train.hpp"

namespace ttrnn {
namespace {

using nlohmann::ordered_json;
using text::CleanExample;
using text::Emotion;

constexpr CellVariant kAllVariants[] = {CellVariant::kElman, CellVariant::kJordan,
                                        CellVariant::kLstm,  CellVariant::kGru,
                                        CellVariant::kTRnn,  CellVariant::kTLstm,
                                        CellVariant::kTGru};

// Two classes decided by a single keyword surrounded by shared filler.
std::vector<CleanExample> toy_dataset(std::size_t per_class) {
  const std::vector<std::string> filler = {"the", "a", "day", "was", "today", "so", "very", "it"};
  std::vector<CleanExample> out;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool positive = i % 2 == 0;
    std::string text = filler[i % filler.size()] + " " + filler[(i / 3) % filler.size()];
    const std::string keyword = positive ? "sunshine" : "thunder";
    text = (i % 3 == 0) ? keyword + " " + text : text + " " + keyword;
    out.push_back(text::clean_example(
        {"toy-" + std::to_string(i), text, positive ? Emotion::kHappy : Emotion::kSad}));
  }
  return out;
}

TrainConfig toy_config(CellVariant variant) {
  TrainConfig c;
  c.variant = variant;
  c.hidden_dim = 16;
  c.embed_dim = 16;
  c.tt_rank = 2;
  c.task = Task::kSentiment;
  c.epochs = 50;
  c.patience = 0;
  c.batch_size = 8;
  c.learning_rate = 0.01;
  c.max_len = 6;
  c.seed = 3;
  return c;
}

TEST(Split, EightyTwentyStratified) {
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < (c == 0 ? 40u : 20u); ++i) labels.push_back(c);
  const SplitIndices s = split_train_test(labels, 0.8, 11);
  EXPECT_EQ(s.train.size(), 80u);
  EXPECT_EQ(s.test.size(), 20u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 100u);
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  EXPECT_TRUE(std::is_sorted(s.test.begin(), s.test.end()));
  for (std::size_t c = 0; c < 4; ++c) {
    const auto n_c = static_cast<double>(std::count(labels.begin(), labels.end(), c));
    const auto in_train = static_cast<double>(
        std::count_if(s.train.begin(), s.train.end(), [&](std::size_t i) { return labels[i] == c; }));
    EXPECT_LE(std::abs(in_train - 0.8 * n_c), 1.0);
  }
  const SplitIndices again = split_train_test(labels, 0.8, 11);
  EXPECT_EQ(again.train, s.train);
  EXPECT_NE(split_train_test(labels, 0.8, 12).train, s.train);
}

TEST(Split, HalfOfOneClass) {
  const std::vector<std::size_t> labels(10, 2);
  const SplitIndices s = split_train_test(labels, 0.5, 1);
  EXPECT_EQ(s.train.size(), 5u);
  EXPECT_EQ(s.test.size(), 5u);
}

TEST(Split, OddSizesAndErrors) {
  std::vector<std::size_t> labels{0, 0, 1, 1, 1, 2, 2, 2, 2, 2, 2};
  const SplitIndices s = split_train_test(labels, 0.8, 4);
  EXPECT_EQ(s.train.size() + s.test.size(), labels.size());
  // Quotas 2/2/5 sum to round(0.8 * 11) = 9, then the two-member class is
  // clamped to one training item.
  EXPECT_EQ(s.train.size(), 8u);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_TRUE(std::any_of(s.test.begin(), s.test.end(), [&](std::size_t i) { return labels[i] == c; }));
    EXPECT_TRUE(std::any_of(s.train.begin(), s.train.end(), [&](std::size_t i) { return labels[i] == c; }));
  }
  EXPECT_ERROR_CODE(split_train_test(std::vector<std::size_t>{0, 0, 1}, 0.8, 1), ErrorCode::kClassTooSmall);
}

TEST(Config, Validation) {
  TrainConfig c;
  c.split_fraction = 1.0;
  EXPECT_ERROR_CODE(c.validate(), ErrorCode::kConfigError);
  c = TrainConfig{};
  c.batch_size = 0;
  EXPECT_ERROR_CODE(c.validate(), ErrorCode::kConfigError);
  c = TrainConfig{};
  c.variant = CellVariant::kGru;
  c.tt = TTConfig{tt::choose_factorization(64, 64, 3), tt::RankVector::uniform(3, 4)};
  EXPECT_ERROR_CODE(make_cell_spec(c), ErrorCode::kConfigError);
  c = TrainConfig{};
  c.variant = CellVariant::kTGru;
  const CellSpec spec = make_cell_spec(c);
  ASSERT_TRUE(spec.tt.has_value());
  EXPECT_EQ(spec.tt->facto.order(), 3u);
  EXPECT_EQ(spec.tt->ranks, tt::RankVector::uniform(3, 4));
  EXPECT_EQ(spec.output_dim, 6u);
  const TrainConfig defaults;
  EXPECT_EQ(defaults.epochs, 450u);
  EXPECT_EQ(defaults.patience, 10u);
  EXPECT_EQ(defaults.batch_size, 32u);
  EXPECT_EQ(defaults.learning_rate, 1e-3);
  EXPECT_EQ(defaults.optimizer, OptimizerKind::kAdam);
  EXPECT_EQ(defaults.split_fraction, 0.8);
}

TEST(Prepare, DropsTokenlessExamples) {
  std::vector<CleanExample> data = toy_dataset(10);
  data.push_back(text::clean_example({"empty", "@nobody", Emotion::kHappy}));
  const PreparedData p = prepare_data(data, Task::kSentiment, 0.8, 1);
  EXPECT_EQ(p.dropped_empty, 1u);
  EXPECT_EQ(p.examples.size(), 20u);
  EXPECT_EQ(p.split.train.size() + p.split.test.size(), 20u);
}

TEST(Train, PatienceZeroRunsEveryEpoch) {
  TrainConfig c = toy_config(CellVariant::kElman);
  c.epochs = 7;
  const TrainResult r = train(c, toy_dataset(20));
  EXPECT_EQ(r.epochs.size(), 7u);
  EXPECT_EQ(r.log_lines.size(), 7u);
}

TEST(Train, EarlyStopReturnsBestLoggedCheckpoint) {
  TrainConfig c = toy_config(CellVariant::kGru);
  c.learning_rate = 0.002;
  c.epochs = 40;
  c.patience = 3;
  const TrainResult r = train(c, toy_dataset(30));
  ASSERT_FALSE(r.log_lines.empty());
  EXPECT_LT(r.epochs.size(), 40u);
  double best = -1.0;
  std::size_t best_epoch = 0;
  for (const std::string& line : r.log_lines) {
    const ordered_json j = ordered_json::parse(line);
    if (j["val_macro_f1"].get<double>() > best) {
      best = j["val_macro_f1"].get<double>();
      best_epoch = j["epoch"].get<std::size_t>();
    }
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
  EXPECT_EQ(r.model.info["best_epoch"].get<std::size_t>(), best_epoch);
  const ordered_json first = ordered_json::parse(r.log_lines.front());
  for (const char* key : {"epoch", "train_loss", "train_accuracy", "val_loss", "val_macro_f1", "val_micro_f1",
                          "val_accuracy", "cell", "input_map_params", "cell_params",
                          "embedding_params", "tt"})
    EXPECT_TRUE(first.contains(key)) << key;
  EXPECT_FALSE(first.contains("seconds"));
}

TEST(Train, ToySetIsLearnedByEveryVariant) {
  const std::vector<CleanExample> data = toy_dataset(30);
  for (CellVariant v : kAllVariants) {
    const TrainResult r = train(toy_config(v), data);
    ASSERT_EQ(r.epochs.size(), 50u);
    std::size_t first_perfect = 0;
    for (const EpochRecord& e : r.epochs) {
      if (e.train_accuracy == 1.0) {
        first_perfect = e.epoch;
        break;
      }
    }
    EXPECT_GT(first_perfect, 0u) << variant_name(v) << " never fit the training set";
    // The returned checkpoint is chosen on validation F1, so it may predate
    // the perfect epoch; it should still fit nearly all of the training set.
    const PreparedData p = prepare_data(data, Task::kSentiment, 0.8, toy_config(v).seed);
    std::vector<text::EncodedExample> train_set;
    for (std::size_t i : p.split.train) train_set.push_back(r.model.encode(p.examples[i]));
    EXPECT_GE(evaluate(r.model, train_set).accuracy, 0.95) << variant_name(v);
  }
}

TEST(Train, DeterministicAcrossRunsAndThreads) {
  const std::vector<CleanExample> data = toy_dataset(20);
  TrainConfig c = toy_config(CellVariant::kTLstm);
  c.epochs = 5;
  c.input_dropout = 0.2;
  const TrainResult a = train(c, data);
  const TrainResult b = train(c, data);
  c.threads = 3;
  const TrainResult threaded = train(c, data);
  EXPECT_EQ(a.log_lines, b.log_lines);
  EXPECT_EQ(a.log_lines, threaded.log_lines);
  // The config is part of the stored info, so compare everything else.
  EXPECT_EQ(serialize_model(a.model), serialize_model(b.model));
  const auto pa = a.model.parameters(), pt = threaded.model.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i].value(), pt[i].value());
}

TEST(Train, StoredMetricsAreReproduced) {
  const std::vector<CleanExample> data = toy_dataset(20);
  TrainConfig c = toy_config(CellVariant::kTGru);
  c.epochs = 4;
  const TrainResult r = train(c, data);
  const MetricsReport again = evaluate_dataset(r.model, data, true);
  EXPECT_EQ(again.macro_f1, r.test_metrics.macro_f1);
  EXPECT_EQ(again.loss, r.test_metrics.loss);
  EXPECT_EQ(again.count, r.test_metrics.count);
  EXPECT_EQ(evaluate_dataset(r.model, data, false).count, 40u);
  EXPECT_EQ(r.model.info["metrics"]["macro_f1"].get<double>(), r.test_metrics.macro_f1);
}

TEST(Train, FullRankTGruMatchesDenseGruModel) {
  TrainConfig c = toy_config(CellVariant::kGru);
  c.epochs = 1;
  const std::vector<CleanExample> data = toy_dataset(10);
  const TrainResult dense = train(c, data);
  Model tensorized = dense.model;
  tensorized.weights = tensorize(dense.model.weights, tt::choose_factorization(16, 16, 3));
  EXPECT_EQ(tensorized.weights.spec.variant, CellVariant::kTGru);
  for (const CleanExample& ex : data) {
    const text::EncodedExample e = dense.model.encode(ex);
    EXPECT_LE(max_abs_diff(dense.model.forward(e), tensorized.forward(e)), 1e-8);
    std::vector<Tensor> inputs;
    for (std::size_t id : e.token_ids) {
      Tensor row(Shape{16});
      for (std::size_t k = 0; k < 16; ++k) row[k] = dense.model.embedding.value().at(id, k);
      inputs.push_back(row);
    }
    const CellState a = run_sequence(dense.model.weights, inputs, e.padding());
    const CellState b = run_sequence(tensorized.weights, inputs, e.padding());
    EXPECT_LE(max_abs_diff(a.h, b.h), 1e-8);
  }
}

TEST(Metrics, JsonLayout) {
  const std::vector<std::size_t> labels{0, 1}, preds{0, 0};
  const ordered_json j = metrics_to_json(compute_metrics(labels, preds, 2, 0.25), {"Positive", "Negative"});
  EXPECT_EQ(j["accuracy"].get<double>(), 0.5);
  EXPECT_EQ(j["loss"].get<double>(), 0.25);
  EXPECT_TRUE(j.contains("per_class"));
}

}  // namespace
}  // namespace ttrnn
