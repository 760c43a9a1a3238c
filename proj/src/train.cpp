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

#include "ttrnn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "ttrnn/error.hpp"
#include "ttrnn/log.hpp"
#include "ttrnn/rng.hpp"
#include "ttrnn/tt.hpp"

namespace ttrnn {

namespace {

using nlohmann::ordered_json;

// Seed streams derived from TrainConfig::seed.
enum Stream : std::uint64_t {
  kSplitStream = 1,
  kValidationStream = 2,
  kCellInitStream = 3,
  kEmbeddingInitStream = 4,
  kShuffleStream = 5,
  kDropoutStream = 6,
};

constexpr double kImprovementThreshold = 1e-4;
constexpr double kEmbeddingStddev = 0.1;

// Runs fn(i, worker) for i in [0, n) on up to `threads` workers with static
// striding. The first exception (by worker) is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void shuffle(std::vector<std::size_t>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.uniform_index(i)]);
  }
}

double example_loss(const Tensor& probs, std::size_t label) {
  return -std::log(probs[label] + ad::kCrossEntropyEpsilon);
}

// Gradient of one example: dense cell-parameter gradients concatenated in
// parameter order, plus the embedding rows the example touched.
struct ItemGradient {
  double loss = 0.0;
  bool correct = false;
  std::vector<double> cell;
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
};

struct Replica {
  CellWeights weights;
  std::vector<ad::Var> params;
};

void compute_item_gradient(const Replica& replica, const Tensor& embedding,
                           const text::EncodedExample& example, double dropout, SplitMix64 dropout_rng,
                           ItemGradient& out) {
  const std::size_t E = replica.weights.spec.input_dim;
  ad::zero_grads(replica.params);
  ad::Tape tape;
  std::vector<std::pair<std::size_t, ad::Var>> rows;
  const std::vector<bool> padding = example.padding();
  std::vector<ad::Var> inputs;
  inputs.reserve(example.token_ids.size());
  const auto table = embedding.data();
  for (std::size_t pos = 0; pos < example.token_ids.size(); ++pos) {
    if (padding[pos]) {
      inputs.push_back(tape.constant(Tensor(Shape{E})));
      continue;
    }
    const std::size_t id = example.token_ids[pos];
    auto it = std::find_if(rows.begin(), rows.end(), [id](const auto& r) { return r.first == id; });
    if (it == rows.end()) {
      Tensor row = Tensor::vector({table.begin() + static_cast<std::ptrdiff_t>(id * E),
                                   table.begin() + static_cast<std::ptrdiff_t>((id + 1) * E)});
      rows.emplace_back(id, ad::Var::parameter(std::move(row), "embedding.row"));
      it = std::prev(rows.end());
    }
    if (dropout > 0.0) {
      Tensor mask(Shape{E});
      for (double& m : mask.mutable_data()) m = dropout_rng.uniform() < dropout ? 0.0 : 1.0 / (1.0 - dropout);
      inputs.push_back(tape.hadamard(it->second, tape.constant(std::move(mask))));
    } else {
      inputs.push_back(it->second);
    }
  }
  const TapedState state = run_sequence(tape, replica.weights, inputs, padding);
  const ad::Var probs = classify(tape, replica.weights, state.h);
  const ad::Var loss = tape.cross_entropy(probs, example.class_id);
  tape.backward(loss);

  out.loss = loss.value().item();
  out.correct = predicted_class(probs.value()) == example.class_id;
  out.cell.clear();
  for (const ad::Var& p : replica.params) out.cell.insert(out.cell.end(), p.grad().data().begin(), p.grad().data().end());
  out.rows.clear();
  for (const auto& [id, var] : rows) {
    out.rows.emplace_back(id, std::vector<double>(var.grad().data().begin(), var.grad().data().end()));
  }
}

void copy_values(std::span<const ad::Var> from, std::span<const ad::Var> to) {
  for (std::size_t i = 0; i < from.size(); ++i) to[i].mutable_value() = from[i].value();
}

std::vector<Tensor> snapshot(std::span<const ad::Var> params) {
  std::vector<Tensor> values;
  values.reserve(params.size());
  for (const ad::Var& p : params) values.push_back(p.value());
  return values;
}

ordered_json tt_json(const CellSpec& spec) {
  if (!spec.tt) return nullptr;
  return {{"out_modes", spec.tt->facto.out_modes()},
          {"in_modes", spec.tt->facto.in_modes()},
          {"ranks", spec.tt->ranks.values()}};
}

std::vector<std::size_t> pick(std::span<const std::size_t> from, std::span<const std::size_t> positions) {
  std::vector<std::size_t> out;
  out.reserve(positions.size());
  for (std::size_t p : positions) out.push_back(from[p]);
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  auto check = [](bool ok, const std::string& message) {
    if (!ok) fail(ErrorCode::kConfigError, message);
  };
  check(hidden_dim > 0 && embed_dim > 0, "hidden and embedding sizes must be positive");
  check(epochs > 0, "epochs must be positive");
  check(batch_size > 0, "batch size must be positive");
  check(learning_rate > 0.0 && std::isfinite(learning_rate), "learning rate must be positive");
  check(split_fraction > 0.0 && split_fraction < 1.0, "split fraction must lie in (0, 1)");
  check(validation_fraction > 0.0 && validation_fraction < 1.0, "validation fraction must lie in (0, 1)");
  check(max_len > 0, "max_len must be positive");
  check(max_vocab >= 2, "max_vocab must be at least 2");
  check(threads > 0, "threads must be positive");
  check(tt_rank > 0, "TT rank must be positive");
  check(clip_norm >= 0.0, "clip norm must be non-negative");
  check(input_dropout >= 0.0 && input_dropout < 1.0, "input dropout must lie in [0, 1)");
}

ordered_json TrainConfig::to_json() const {
  ordered_json j;
  j["epochs"] = epochs;
  j["patience"] = patience;
  j["batch_size"] = batch_size;
  j["learning_rate"] = learning_rate;
  j["optimizer"] = optimizer_name(optimizer);
  j["clip_norm"] = clip_norm;
  j["input_dropout"] = input_dropout;
  j["seed"] = seed;
  j["split_fraction"] = split_fraction;
  j["validation_fraction"] = validation_fraction;
  j["max_len"] = max_len;
  j["min_count"] = min_count;
  j["max_vocab"] = max_vocab;
  j["task"] = task_name(task);
  j["tt_rank"] = tt_rank;
  return j;
}

CellSpec make_cell_spec(const TrainConfig& config) {
  CellSpec spec;
  spec.variant = config.variant;
  spec.input_dim = config.embed_dim;
  spec.hidden_dim = config.hidden_dim;
  spec.output_dim = class_names(config.task).size();
  spec.gru_candidate_bias = config.gru_candidate_bias;
  if (is_tensorized(config.variant)) {
    if (config.tt) {
      spec.tt = config.tt;
    } else {
      const tt::ModeFactorization facto = tt::choose_factorization(config.hidden_dim, config.embed_dim, 3);
      spec.tt = TTConfig{facto, tt::RankVector::uniform(facto.order(), config.tt_rank)};
    }
  } else if (config.tt) {
    fail(ErrorCode::kConfigError,
         fmt::format("cell '{}' is dense and takes no TT layout", variant_name(config.variant)));
  }
  spec.validate();
  return spec;
}

SplitIndices split_train_test(std::span<const std::size_t> labels, double fraction, std::uint64_t seed) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::kInvalidArgument, "split fraction must lie in (0, 1)");
  require(labels.size() >= 2, ErrorCode::kInvalidArgument, "need at least two examples to split");
  const std::size_t num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

  // Largest-remainder allocation of round(fraction * n) training slots.
  const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(labels.size())));
  std::vector<std::size_t> quota(num_classes, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (members[c].empty()) continue;
    if (members[c].size() < 2) {
      fail(ErrorCode::kClassTooSmall,
           fmt::format("class {} has {} member; stratified splitting needs at least 2", c, members[c].size()));
    }
    const double exact = fraction * static_cast<double>(members[c].size());
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < target && k < remainders.size(); ++k, ++assigned) ++quota[remainders[k].second];

  SplitIndices split;
  const SplitMix64 root(seed);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (members[c].empty()) continue;
    quota[c] = std::clamp<std::size_t>(quota[c], 1, members[c].size() - 1);
    SplitMix64 rng = root.split(c);
    shuffle(members[c], rng);
    split.train.insert(split.train.end(), members[c].begin(), members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
    split.test.insert(split.test.end(), members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]), members[c].end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

PreparedData prepare_data(const std::vector<text::CleanExample>& data, Task task, double fraction,
                          std::uint64_t seed) {
  PreparedData prepared;
  for (const text::CleanExample& e : data) {
    if (text::tokenize(e.clean_text).empty()) {
      ++prepared.dropped_empty;
      continue;
    }
    prepared.examples.push_back(e);
    prepared.labels.push_back(class_id(task, e));
  }
  if (prepared.dropped_empty) {
    log().warn("skipping {} example(s) with no tokens after cleaning", prepared.dropped_empty);
  }
  prepared.split = split_train_test(prepared.labels, fraction, SplitMix64(seed).split(kSplitStream).next_u64());
  return prepared;
}

ordered_json metrics_to_json(const MetricsReport& report, const std::vector<std::string>& class_names) {
  ordered_json j;
  j["count"] = report.count;
  j["loss"] = report.loss;
  j["accuracy"] = report.accuracy;
  j["macro_f1"] = report.macro_f1;
  j["micro_f1"] = report.micro_f1;
  ordered_json per_class = ordered_json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    per_class.push_back({{"class", c < class_names.size() ? class_names[c] : std::to_string(c)},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support}});
  }
  j["per_class"] = std::move(per_class);
  return j;
}

MetricsReport evaluate(const Model& model, std::span<const text::EncodedExample> examples,
                       std::size_t threads) {
  if (examples.empty()) fail(ErrorCode::kEmptyTestSet, "no examples to evaluate");
  std::vector<std::size_t> predictions(examples.size());
  std::vector<double> losses(examples.size());
  parallel_for(examples.size(), threads, [&](std::size_t i, std::size_t) {
    const Tensor probs = model.forward(examples[i]);
    predictions[i] = predicted_class(probs);
    losses[i] = example_loss(probs, examples[i].class_id);
  });
  std::vector<std::size_t> labels;
  labels.reserve(examples.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    labels.push_back(examples[i].class_id);
    loss += losses[i];
  }
  return compute_metrics(labels, predictions, model.num_classes(), loss / static_cast<double>(examples.size()));
}

MetricsReport evaluate_dataset(const Model& model, const std::vector<text::CleanExample>& data,
                               bool test_only, std::size_t threads) {
  std::vector<text::EncodedExample> encoded;
  if (test_only) {
    const ordered_json& split = model.info.at("split");
    const PreparedData prepared = prepare_data(data, model.task, split.at("fraction").get<double>(),
                                               split.at("seed").get<std::uint64_t>());
    for (std::size_t i : prepared.split.test) encoded.push_back(model.encode(prepared.examples[i]));
  } else {
    for (const text::CleanExample& e : data) {
      if (!text::tokenize(e.clean_text).empty()) encoded.push_back(model.encode(e));
    }
  }
  return evaluate(model, encoded, threads);
}

TrainResult train(const TrainConfig& config, const std::vector<text::CleanExample>& data,
                  const std::function<void(const std::string&)>& on_log_line) {
  config.validate();
  const CellSpec spec = make_cell_spec(config);
  const SplitMix64 root(config.seed);
  const std::vector<std::string> names = class_names(config.task);

  // Partition: test | validation | fit.
  const PreparedData prepared = prepare_data(data, config.task, config.split_fraction, config.seed);
  const std::vector<std::size_t> train_labels = pick(prepared.labels, prepared.split.train);
  const SplitIndices inner = split_train_test(train_labels, 1.0 - config.validation_fraction,
                                              root.split(kValidationStream).next_u64());
  const std::vector<std::size_t> fit = pick(prepared.split.train, inner.train);
  const std::vector<std::size_t> validation = pick(prepared.split.train, inner.test);

  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(fit.size());
  for (std::size_t i : fit) corpus.push_back(text::tokenize(prepared.examples[i].clean_text));

  Model model;
  model.task = config.task;
  model.max_len = config.max_len;
  model.vocab = text::Vocabulary::build(corpus, config.min_count, config.max_vocab);
  model.weights = CellWeights::initialize(spec, root.split(kCellInitStream).next_u64());
  model.embedding = ad::Var::parameter(
      random_init(Shape{model.vocab.size(), spec.input_dim}, kEmbeddingStddev,
                  root.split(kEmbeddingInitStream).next_u64()),
      "embedding");

  auto encode_all = [&](const std::vector<std::size_t>& indices) {
    std::vector<text::EncodedExample> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(model.encode(prepared.examples[i]));
    return out;
  };
  const std::vector<text::EncodedExample> fit_set = encode_all(fit);
  const std::vector<text::EncodedExample> validation_set = encode_all(validation);
  const std::vector<text::EncodedExample> test_set = encode_all(prepared.split.test);

  const std::vector<ad::Var> params = model.parameters();
  const std::span<const ad::Var> cell_params(params.begin() + 1, params.end());
  const std::size_t workers = std::min(config.threads, config.batch_size);
  std::vector<Replica> replicas;
  for (std::size_t w = 0; w < workers; ++w) {
    Replica r{model.weights.clone(), {}};
    r.params = r.weights.parameters();
    replicas.push_back(std::move(r));
  }
  std::vector<ItemGradient> slots(config.batch_size);
  Optimizer optimizer(config.optimizer, config.learning_rate);

  const std::size_t input_map_params = model.weights.input_map_param_count();
  const std::size_t cell_total_params = model.weights.total_param_count();
  const std::size_t embedding_params = model.embedding.value().size();
  log().info("training {} (H={}, E={}, C={}) on {} examples, {} validation, {} test; vocabulary {}",
             variant_name(spec.variant), spec.hidden_dim, spec.input_dim, spec.output_dim, fit.size(),
             validation.size(), prepared.split.test.size(), model.vocab.size());

  TrainResult result;
  std::vector<Tensor> best_values = snapshot(params);
  double best_f1 = -1.0;
  double reference_f1 = -1.0;
  std::size_t stale = 0;
  const SplitMix64 shuffle_root = root.split(kShuffleStream);
  const SplitMix64 dropout_root = root.split(kDropoutStream);
  std::vector<std::size_t> order(fit_set.size());

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    SplitMix64 rng = shuffle_root.split(epoch);
    shuffle(order, rng);

    double epoch_loss = 0.0;
    std::size_t epoch_correct = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, order.size() - begin);
      parallel_for(count, workers, [&](std::size_t k, std::size_t w) {
        const std::size_t item = order[begin + k];
        compute_item_gradient(replicas[w], model.embedding.value(), fit_set[item], config.input_dropout,
                              dropout_root.split(epoch).split(item), slots[k]);
      });

      // Reduce in item order so the sum does not depend on the thread count.
      for (const ad::Var& p : params) p.mutable_grad().fill(0.0);
      const double inv = 1.0 / static_cast<double>(count);
      auto emb_grad = model.embedding.mutable_grad().mutable_data();
      const std::size_t E = spec.input_dim;
      for (std::size_t k = 0; k < count; ++k) {
        const ItemGradient& g = slots[k];
        epoch_loss += g.loss;
        epoch_correct += g.correct ? 1 : 0;
        std::size_t offset = 0;
        for (const ad::Var& p : cell_params) {
          auto dst = p.mutable_grad().mutable_data();
          for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g.cell[offset + i];
          offset += dst.size();
        }
        for (const auto& [id, row] : g.rows) {
          for (std::size_t e = 0; e < E; ++e) emb_grad[id * E + e] += row[e];
        }
      }
      for (const ad::Var& p : params)
        for (double& v : p.mutable_grad().mutable_data()) v *= inv;
      if (config.clip_norm > 0.0) clip_grad_norm(params, config.clip_norm);
      optimizer.step(params);
      for (Replica& r : replicas) copy_values(cell_params, r.params);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_loss / static_cast<double>(fit_set.size());
    record.train_accuracy = static_cast<double>(epoch_correct) / static_cast<double>(fit_set.size());
    record.validation = evaluate(model, validation_set, config.threads);
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const double f1 = record.validation.macro_f1;
    if (f1 > best_f1) {
      best_f1 = f1;
      result.best_epoch = epoch;
      best_values = snapshot(params);
    }
    if (f1 >= reference_f1 + kImprovementThreshold) {
      reference_f1 = f1;
      stale = 0;
    } else {
      ++stale;
    }

    ordered_json line;
    line["epoch"] = epoch;
    line["train_loss"] = record.train_loss;
    line["train_accuracy"] = record.train_accuracy;
    line["val_loss"] = record.validation.loss;
    line["val_macro_f1"] = record.validation.macro_f1;
    line["val_micro_f1"] = record.validation.micro_f1;
    line["val_accuracy"] = record.validation.accuracy;
    if (config.log_timing) line["seconds"] = record.seconds;
    line["cell"] = variant_name(spec.variant);
    line["input_map_params"] = input_map_params;
    line["cell_params"] = cell_total_params;
    line["embedding_params"] = embedding_params;
    line["tt"] = tt_json(spec);
    result.log_lines.push_back(line.dump());
    if (on_log_line) on_log_line(result.log_lines.back());
    log().info("epoch {}/{} train loss {:.4f} val loss {:.4f} val macro-F1 {:.4f}", epoch, config.epochs,
               record.train_loss, record.validation.loss, f1);
    result.epochs.push_back(std::move(record));

    if (config.patience > 0 && stale >= config.patience) {
      log().info("early stop after epoch {}: no validation macro-F1 gain of {} in {} epochs", epoch,
                 kImprovementThreshold, config.patience);
      break;
    }
  }

  for (std::size_t i = 0; i < params.size(); ++i) params[i].mutable_value() = best_values[i];
  result.test_metrics = evaluate(model, test_set, config.threads);

  ordered_json info;
  info["training"] = config.to_json();
  info["split"] = {{"seed", config.seed},
                   {"fraction", config.split_fraction},
                   {"validation_fraction", config.validation_fraction},
                   {"train", fit.size()},
                   {"validation", validation.size()},
                   {"test", prepared.split.test.size()},
                   {"dropped_empty", prepared.dropped_empty}};
  info["best_epoch"] = result.best_epoch;
  info["epochs_run"] = result.epochs.size();
  info["deterministic"] = true;
  info["params"] = {{"input_map", input_map_params}, {"cell", cell_total_params}, {"embedding", embedding_params}};
  info["metrics"] = metrics_to_json(result.test_metrics, names);
  model.info = std::move(info);
  result.model = std::move(model);
  return result;
}

}  // namespace ttrnn
