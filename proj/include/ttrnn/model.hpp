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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ttrnn/autodiff.hpp"
#include "ttrnn/cells.hpp"
#include "ttrnn/text.hpp"

namespace ttrnn {

/// Classification target: six emotions or their two-way sentiment.
enum class Task { kEmotion, kSentiment };

std::string_view task_name(Task task);
Task parse_task(std::string_view name);
std::vector<std::string> class_names(Task task);
std::size_t class_id(Task task, const text::CleanExample& example);

struct Prediction {
  std::size_t class_id = 0;
  Tensor probabilities;
};

/// Embedding table, recurrent cell, softmax head and the vocabulary that
/// produced the token ids.
struct Model {
  CellWeights weights;
  ad::Var embedding;  // [vocab, E]
  text::Vocabulary vocab;
  std::size_t max_len = 0;
  Task task = Task::kEmotion;
  /// Free-form provenance stored in the manifest: training config, split,
  /// metrics.
  nlohmann::ordered_json info = nlohmann::ordered_json::object();

  /// Embedding first, then the cell parameters in declared order.
  std::vector<ad::Var> parameters() const;
  std::size_t num_classes() const { return weights.spec.output_dim; }

  /// Class probabilities for an encoded sequence (no tape).
  Tensor forward(const text::EncodedExample& example) const;
  /// Cleans, tokenizes and encodes exactly as training did.
  /// Throws EmptyAfterEncoding when nothing is left.
  Prediction predict(std::string_view raw_text) const;
  text::EncodedExample encode(const text::CleanExample& example) const;
};

std::string serialize_model(const Model& model);
Model parse_model(std::string_view bytes);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

nlohmann::ordered_json spec_to_json(const CellSpec& spec);
CellSpec spec_from_json(const nlohmann::ordered_json& j);

}  // namespace ttrnn
