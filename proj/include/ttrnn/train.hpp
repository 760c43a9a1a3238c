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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttrnn/cells.hpp"
#include "ttrnn/metrics.hpp"
#include "ttrnn/model.hpp"
#include "ttrnn/optim.hpp"
#include "ttrnn/text.hpp"

namespace ttrnn {

struct TrainConfig {
  CellVariant variant = CellVariant::kGru;
  std::size_t hidden_dim = 64;
  std::size_t embed_dim = 64;
  /// Explicit TT layout for tensorized cells; chosen automatically (order 3,
  /// uniform interior rank `tt_rank`) when empty.
  std::optional<TTConfig> tt;
  std::size_t tt_rank = 4;
  bool gru_candidate_bias = true;
  Task task = Task::kEmotion;

  std::size_t epochs = 450;
  std::size_t patience = 10;  // 0 disables early stopping
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double clip_norm = 0.0;      // 0 disables clipping
  double input_dropout = 0.0;  // inverted dropout on embedded tokens, training only
  std::uint64_t seed = 0;
  double split_fraction = 0.8;
  double validation_fraction = 0.1;
  std::size_t max_len = 32;
  std::size_t min_count = 1;
  std::size_t max_vocab = 20000;
  std::size_t threads = 1;
  /// Adds wall-clock seconds to each log line (which makes logs differ
  /// between otherwise identical runs).
  bool log_timing = false;

  /// Throws ConfigError.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

/// The cell spec a config trains, including automatic TT factorization.
CellSpec make_cell_spec(const TrainConfig& config);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified, seeded split of positions 0..labels.size()-1. Each class
/// contributes round(fraction * n_c) items to train (largest remainder, so
/// the total is round(fraction * n)), but at least one to each side. Both
/// lists are sorted. Throws ClassTooSmall for classes with one member.
SplitIndices split_train_test(std::span<const std::size_t> labels, double fraction, std::uint64_t seed);

/// Examples that survive tokenization with their class ids and the seeded
/// train/test partition. Shared by training and by later evaluation so both
/// see the same test set.
struct PreparedData {
  std::vector<text::CleanExample> examples;
  std::vector<std::size_t> labels;
  SplitIndices split;
  std::size_t dropped_empty = 0;
};

PreparedData prepare_data(const std::vector<text::CleanExample>& data, Task task, double fraction,
                          std::uint64_t seed);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  /// Fraction of fit items classified correctly as they were trained on.
  double train_accuracy = 0.0;
  MetricsReport validation;
  double seconds = 0.0;
};

struct TrainResult {
  Model model;  // best-validation checkpoint
  std::vector<EpochRecord> epochs;
  std::vector<std::string> log_lines;  // JSONL, one per epoch
  std::size_t best_epoch = 0;
  MetricsReport test_metrics;
};

/// Seeded training with mini-batches, validation-based early stopping and a
/// final test evaluation. `on_log_line` receives each JSONL line as it is
/// produced. Results do not depend on config.threads.
TrainResult train(const TrainConfig& config, const std::vector<text::CleanExample>& data,
                  const std::function<void(const std::string&)>& on_log_line = {});

/// Mean cross-entropy and metrics of `model` over encoded examples.
MetricsReport evaluate(const Model& model, std::span<const text::EncodedExample> examples,
                       std::size_t threads = 1);

/// Re-creates the split recorded in the model and evaluates on its test part
/// (or on every example when `test_only` is false).
MetricsReport evaluate_dataset(const Model& model, const std::vector<text::CleanExample>& data,
                               bool test_only, std::size_t threads = 1);

nlohmann::ordered_json metrics_to_json(const MetricsReport& report,
                                       const std::vector<std::string>& class_names);

}  // namespace ttrnn
