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

#include "ttrnn/model.hpp"

#include <fmt/format.h>

#include "ttrnn/container.hpp"
#include "ttrnn/dataset_io.hpp"
#include "ttrnn/error.hpp"

namespace ttrnn {

namespace {

using nlohmann::ordered_json;

template <typename T>
T field(const ordered_json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, fmt::format("model manifest field '{}': {}", key, e.what()));
  }
}

}  // namespace

std::string_view task_name(Task task) { return task == Task::kEmotion ? "emotion" : "sentiment"; }

Task parse_task(std::string_view name) {
  if (name == "emotion") return Task::kEmotion;
  if (name == "sentiment") return Task::kSentiment;
  fail(ErrorCode::kConfigError, fmt::format("unknown task '{}' (expected emotion or sentiment)", name));
}

std::vector<std::string> class_names(Task task) {
  std::vector<std::string> names;
  if (task == Task::kEmotion) {
    for (text::Emotion e : text::kAllEmotions) names.emplace_back(text::emotion_name(e));
  } else {
    names = {std::string(text::sentiment_name(text::Sentiment::kPositive)),
             std::string(text::sentiment_name(text::Sentiment::kNegative))};
  }
  return names;
}

std::size_t class_id(Task task, const text::CleanExample& example) {
  return task == Task::kEmotion ? static_cast<std::size_t>(example.emotion)
                                : static_cast<std::size_t>(example.sentiment);
}

std::vector<ad::Var> Model::parameters() const {
  std::vector<ad::Var> params{embedding};
  for (ad::Var& v : weights.parameters()) params.push_back(std::move(v));
  return params;
}

Tensor Model::forward(const text::EncodedExample& example) const {
  const std::size_t E = weights.spec.input_dim;
  const auto table = embedding.value().data();
  std::vector<Tensor> inputs;
  inputs.reserve(example.token_ids.size());
  for (std::size_t id : example.token_ids) {
    require(id < vocab.size(), ErrorCode::kLabelOutOfRange,
            fmt::format("token id {} outside vocabulary of {}", id, vocab.size()));
    inputs.push_back(Tensor::vector({table.begin() + static_cast<std::ptrdiff_t>(id * E),
                                     table.begin() + static_cast<std::ptrdiff_t>((id + 1) * E)}));
  }
  const CellState state = run_sequence(weights, inputs, example.padding());
  return classify(weights, state.h);
}

text::EncodedExample Model::encode(const text::CleanExample& example) const {
  return text::encode(text::tokenize(example.clean_text), vocab, max_len, class_id(task, example));
}

Prediction Model::predict(std::string_view raw_text) const {
  const text::CleanedText cleaned = text::clean_tweet(raw_text);
  const text::EncodedExample encoded = text::encode(text::tokenize(cleaned.text), vocab, max_len);
  Prediction p;
  p.probabilities = forward(encoded);
  p.class_id = predicted_class(p.probabilities);
  return p;
}

ordered_json spec_to_json(const CellSpec& spec) {
  ordered_json j;
  j["variant"] = variant_name(spec.variant);
  j["input_dim"] = spec.input_dim;
  j["hidden_dim"] = spec.hidden_dim;
  j["output_dim"] = spec.output_dim;
  j["gru_candidate_bias"] = spec.gru_candidate_bias;
  if (spec.tt) {
    j["tt"] = {{"out_modes", spec.tt->facto.out_modes()},
               {"in_modes", spec.tt->facto.in_modes()},
               {"ranks", spec.tt->ranks.values()}};
  } else {
    j["tt"] = nullptr;
  }
  return j;
}

CellSpec spec_from_json(const ordered_json& j) {
  CellSpec spec;
  spec.variant = parse_variant(field<std::string>(j, "variant"));
  spec.input_dim = field<std::size_t>(j, "input_dim");
  spec.hidden_dim = field<std::size_t>(j, "hidden_dim");
  spec.output_dim = field<std::size_t>(j, "output_dim");
  spec.gru_candidate_bias = field<bool>(j, "gru_candidate_bias");
  if (j.contains("tt") && !j.at("tt").is_null()) {
    const ordered_json& t = j.at("tt");
    spec.tt = TTConfig{tt::ModeFactorization(field<std::vector<std::size_t>>(t, "out_modes"),
                                             field<std::vector<std::size_t>>(t, "in_modes")),
                       tt::RankVector(field<std::vector<std::size_t>>(t, "ranks"))};
  }
  spec.validate();
  return spec;
}

std::string serialize_model(const Model& model) {
  ordered_json manifest;
  manifest["format_version"] = container::kFormatVersion;
  manifest["kind"] = "model";
  manifest["cell"] = spec_to_json(model.weights.spec);
  manifest["task"] = task_name(model.task);
  manifest["classes"] = class_names(model.task);
  manifest["max_len"] = model.max_len;
  manifest["vocab"] = {{"size", model.vocab.size()},
                       {"checksum", fmt::format("{:08x}", model.vocab.checksum())},
                       {"tokens", model.vocab.tokens()}};
  ordered_json tensors = ordered_json::array();
  std::vector<double> values;
  for (const ad::Var& p : model.parameters()) {
    tensors.push_back({{"name", p.name()}, {"shape", p.shape().dims()}});
    values.insert(values.end(), p.value().data().begin(), p.value().data().end());
  }
  manifest["tensors"] = std::move(tensors);
  manifest["info"] = model.info;
  return container::serialize(manifest, values);
}

Model parse_model(std::string_view bytes) {
  const container::Container c = container::parse(bytes);
  const ordered_json& m = c.manifest;
  if (m.value("kind", "") != "model") fail(ErrorCode::kParseError, "file is not a ttrnn model");

  Model model;
  const CellSpec spec = spec_from_json(field<ordered_json>(m, "cell"));
  model.task = parse_task(field<std::string>(m, "task"));
  model.max_len = field<std::size_t>(m, "max_len");
  const ordered_json& vocab = field<ordered_json>(m, "vocab");
  model.vocab = text::Vocabulary::from_tokens(field<std::vector<std::string>>(vocab, "tokens"));
  const std::string checksum = fmt::format("{:08x}", model.vocab.checksum());
  if (checksum != field<std::string>(vocab, "checksum")) {
    fail(ErrorCode::kChecksumMismatch, fmt::format("vocabulary checksum {} does not match manifest {}",
                                                   checksum, field<std::string>(vocab, "checksum")));
  }
  require(spec.output_dim == class_names(model.task).size(), ErrorCode::kParseError,
          "cell output size does not match the task");
  model.weights = CellWeights::zeros(spec);
  model.embedding = ad::Var::parameter(Tensor(Shape{model.vocab.size(), spec.input_dim}), "embedding");
  model.info = m.value("info", ordered_json::object());

  const ordered_json& tensors = field<ordered_json>(m, "tensors");
  const std::vector<ad::Var> params = model.parameters();
  require(tensors.size() == params.size(), ErrorCode::kParseError,
          fmt::format("manifest lists {} tensors, the cell has {}", tensors.size(), params.size()));
  std::size_t offset = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto name = field<std::string>(tensors[i], "name");
    const auto dims = field<std::vector<std::size_t>>(tensors[i], "shape");
    if (name != params[i].name() || dims != params[i].shape().dims()) {
      fail(ErrorCode::kParseError, fmt::format("tensor {} is '{}' {}, expected '{}' {}", i, name,
                                               Shape(dims).to_string(), params[i].name(),
                                               params[i].shape().to_string()));
    }
    auto dst = params[i].mutable_value().mutable_data();
    require(offset + dst.size() <= c.values.size(), ErrorCode::kParseError, "model file has too few values");
    std::copy_n(c.values.begin() + static_cast<std::ptrdiff_t>(offset), dst.size(), dst.begin());
    offset += dst.size();
  }
  require(offset == c.values.size(), ErrorCode::kParseError, "model file has trailing values");
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  io::write_file(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path) { return parse_model(io::read_file(path)); }

}  // namespace ttrnn
