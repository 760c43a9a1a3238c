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

// Command-line front end: clean, filter, build-vocab, train, evaluate,
// predict, compress and benchmark.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ttrnn/benchmark.hpp"
#include "ttrnn/container.hpp"
#include "ttrnn/dataset_io.hpp"
#include "ttrnn/error.hpp"
#include "ttrnn/log.hpp"
#include "ttrnn/model.hpp"
#include "ttrnn/text.hpp"
#include "ttrnn/train.hpp"
#include "ttrnn/tt.hpp"

namespace fs = std::filesystem;
using namespace ttrnn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

std::optional<io::DataFormat> format_option(const std::string& name) {
  if (name == "auto") return std::nullopt;
  return io::parse_format(name);
}

// Refuses to overwrite an input file.
void check_distinct(const fs::path& input, const fs::path& output) {
  std::error_code ec;
  if (fs::exists(output, ec) && fs::equivalent(input, output, ec)) {
    fail(ErrorCode::kConfigError, fmt::format("output '{}' would overwrite input '{}'", output.string(),
                                              input.string()));
  }
}

void check_readable(const fs::path& path) {
  if (!fs::is_regular_file(path)) fail(ErrorCode::kIoError, fmt::format("cannot read '{}'", path.string()));
}

// Full rank vector from a user list: either d+1 values, d-1 interior values
// or one value for every interior position.
tt::RankVector rank_vector(const std::vector<std::size_t>& given, std::size_t order) {
  if (given.size() == order + 1) return tt::RankVector(given);
  if (given.size() == 1) return tt::RankVector::uniform(order, given[0]);
  if (order >= 2 && given.size() == order - 1) {
    std::vector<std::size_t> full{1};
    full.insert(full.end(), given.begin(), given.end());
    full.push_back(1);
    return tt::RankVector(full);
  }
  fail(ErrorCode::kInvalidRank, fmt::format("{} ranks given for {} cores (expected {}, {} or 1)", given.size(),
                                            order, order + 1, order >= 2 ? order - 1 : 1));
}

void print_metrics(const MetricsReport& report, const std::vector<std::string>& names) {
  fmt::print("examples {}\n", report.count);
  fmt::print("loss {}\n", report.loss);
  fmt::print("accuracy {}\n", report.accuracy);
  fmt::print("macro_f1 {}\n", report.macro_f1);
  fmt::print("micro_f1 {}\n", report.micro_f1);
  fmt::print("{:<10} {:>10} {:>10} {:>10} {:>8}\n", "class", "precision", "recall", "f1", "support");
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    fmt::print("{:<10} {:>10.4f} {:>10.4f} {:>10.4f} {:>8}\n", names.at(c), m.precision, m.recall, m.f1,
               m.support);
  }
}

// ---------------------------------------------------------------------------

struct CleanArgs {
  std::string in, out, format = "auto";
};

int run_clean(const CleanArgs& a) {
  check_readable(a.in);
  check_distinct(a.in, a.out);
  const auto fmt_choice = format_option(a.format).value_or(io::format_from_extension(a.in));
  const auto raw = io::load_dataset(a.in, fmt_choice);
  std::vector<text::CleanExample> cleaned;
  cleaned.reserve(raw.size());
  for (const auto& r : raw) cleaned.push_back(text::clean_example(r));
  io::write_file(a.out, io::cleaned_to_jsonl(cleaned));
  fmt::print("records in {}, out {}\n", raw.size(), cleaned.size());
  return kExitOk;
}

struct FilterArgs {
  std::string in, predictions, out, format = "auto";
};

int run_filter(const FilterArgs& a) {
  check_readable(a.in);
  check_readable(a.predictions);
  check_distinct(a.in, a.out);
  check_distinct(a.predictions, a.out);
  const auto examples = io::load_clean_examples(a.in, format_option(a.format));
  const auto predictions = io::load_predictions(a.predictions);
  const text::FilterResult result = text::filter_by_sentiment_agreement(examples, predictions);
  io::write_file(a.out, io::cleaned_to_jsonl(result.kept));
  fmt::print("kept {}, dropped {} mismatch, {} neutral\n", result.stats.kept, result.stats.dropped_mismatch,
             result.stats.dropped_neutral);
  return kExitOk;
}

struct VocabArgs {
  std::string in, out, format = "auto";
  std::size_t min_count = 1;
  std::size_t max_size = 20000;
};

int run_build_vocab(const VocabArgs& a) {
  check_readable(a.in);
  check_distinct(a.in, a.out);
  const auto examples = io::load_clean_examples(a.in, format_option(a.format));
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(examples.size());
  for (const auto& e : examples) corpus.push_back(text::tokenize(e.clean_text));
  const auto vocab = text::Vocabulary::build(corpus, a.min_count, a.max_size);
  std::string out;
  for (const auto& token : vocab.tokens()) out += token + "\n";
  io::write_file(a.out, out);
  fmt::print("vocabulary {} tokens, checksum {:08x}\n", vocab.size(), vocab.checksum());
  return kExitOk;
}

struct TrainArgs {
  std::string data, format = "auto", cell, out, log_path, task = "emotion", optimizer = "adam";
  std::size_t hidden = 0, embed = 0;
  std::vector<std::size_t> tt_modes, tt_in_modes, tt_ranks;
  TrainConfig config;
};

int run_train(TrainArgs a) {
  check_readable(a.data);
  check_distinct(a.data, a.out);
  TrainConfig& config = a.config;
  config.variant = parse_variant(a.cell);
  config.hidden_dim = a.hidden;
  config.embed_dim = a.embed;
  config.task = parse_task(a.task);
  config.optimizer = parse_optimizer(a.optimizer);

  const bool any_tt = !a.tt_modes.empty() || !a.tt_in_modes.empty() || !a.tt_ranks.empty();
  if (any_tt && !is_tensorized(config.variant)) {
    fail(ErrorCode::kConfigError, fmt::format("--tt-* flags apply only to tensorized cells, not '{}'", a.cell));
  }
  if (a.tt_modes.empty() != a.tt_in_modes.empty()) {
    fail(ErrorCode::kConfigError, "--tt-modes and --tt-in-modes must be given together");
  }
  if (!a.tt_modes.empty() || !a.tt_ranks.empty()) {
    const tt::ModeFactorization facto =
        a.tt_modes.empty() ? tt::choose_factorization(a.hidden, a.embed, 3)
                           : tt::ModeFactorization(a.tt_modes, a.tt_in_modes);
    const tt::RankVector ranks = a.tt_ranks.empty() ? tt::RankVector::uniform(facto.order(), config.tt_rank)
                                                    : rank_vector(a.tt_ranks, facto.order());
    config.tt = TTConfig{facto, ranks};
  }
  make_cell_spec(config);  // surface configuration errors before reading data

  const auto data = io::load_clean_examples(a.data, format_option(a.format));
  const std::string log_path = a.log_path.empty() ? a.out + ".log.jsonl" : a.log_path;
  check_distinct(a.data, log_path);
  std::ofstream log_file(log_path, std::ios::binary | std::ios::trunc);
  if (!log_file) fail(ErrorCode::kIoError, fmt::format("cannot open '{}' for writing", log_path));

  const TrainResult result = train(config, data, [&](const std::string& line) {
    log_file << line << '\n';
    log_file.flush();
  });
  if (!log_file) fail(ErrorCode::kIoError, fmt::format("error while writing '{}'", log_path));
  save_model(result.model, a.out);

  const CellSpec& spec = result.model.weights.spec;
  fmt::print("cell {} H={} E={} classes={}\n", variant_name(spec.variant), spec.hidden_dim, spec.input_dim,
             spec.output_dim);
  if (spec.tt) {
    fmt::print("tt out_modes [{}] in_modes [{}] ranks [{}]\n", fmt::join(spec.tt->facto.out_modes(), ","),
               fmt::join(spec.tt->facto.in_modes(), ","), fmt::join(spec.tt->ranks.values(), ","));
  }
  fmt::print("params input_map {}, cell {}, embedding {}\n", result.model.weights.input_map_param_count(),
             result.model.weights.total_param_count(), result.model.embedding.value().size());
  fmt::print("epochs {}, best epoch {}\n", result.epochs.size(), result.best_epoch);
  print_metrics(result.test_metrics, class_names(config.task));
  return kExitOk;
}

struct EvaluateArgs {
  std::string model, data, format = "auto", split = "test";
  std::size_t threads = 1;
};

int run_evaluate(const EvaluateArgs& a) {
  check_readable(a.model);
  check_readable(a.data);
  const Model model = load_model(a.model);
  const auto data = io::load_clean_examples(a.data, format_option(a.format));
  const bool test_only = a.split == "test";
  const MetricsReport report = evaluate_dataset(model, data, test_only, a.threads);
  print_metrics(report, class_names(model.task));
  if (test_only && model.info.contains("metrics")) {
    const bool match = metrics_to_json(report, class_names(model.task)) == model.info.at("metrics");
    fmt::print("stored metrics {}\n", match ? "reproduced" : "differ");
  }
  return kExitOk;
}

struct PredictArgs {
  std::string model, text;
};

int run_predict(const PredictArgs& a) {
  check_readable(a.model);
  const Model model = load_model(a.model);
  const Prediction p = model.predict(a.text);
  const auto names = class_names(model.task);
  fmt::print("class {}\n", names.at(p.class_id));
  for (std::size_t c = 0; c < names.size(); ++c) fmt::print("{} {}\n", names[c], p.probabilities[c]);
  return kExitOk;
}

struct CompressArgs {
  std::string matrix, out;
  std::vector<std::size_t> modes, in_modes, ranks;
  double eps = -1.0;
};

int run_compress(const CompressArgs& a) {
  check_readable(a.matrix);
  check_distinct(a.matrix, a.out);
  const Tensor w = container::parse_matrix(io::read_file(a.matrix));
  const tt::ModeFactorization facto(a.modes, a.in_modes);
  if (facto.rows() != w.rows() || facto.cols() != w.cols()) {
    fail(ErrorCode::kConfigError,
         fmt::format("modes describe a {}x{} matrix but '{}' is {}x{}", facto.rows(), facto.cols(), a.matrix,
                     w.rows(), w.cols()));
  }
  tt::TTMatrix matrix = !a.ranks.empty() ? tt::tt_svd(w, facto, rank_vector(a.ranks, facto.order()))
                        : a.eps >= 0.0   ? tt::tt_svd(w, facto, a.eps)
                                         : tt::tt_svd(w, facto);
  io::write_file(a.out, container::serialize_tt(matrix));
  const double error = relative_error(tt::reconstruct(matrix), w);
  fmt::print("params {}, ratio {:.2f}\n", tt::param_count(matrix), tt::compression_ratio(matrix));
  fmt::print("dense params {}\n", w.size());
  fmt::print("ranks [{}]\n", fmt::join(matrix.ranks().values(), ","));
  fmt::print("relative error {:.6e}\n", error);
  return kExitOk;
}

struct BenchmarkArgs {
  std::vector<std::string> pairs;
  std::size_t steps = kMinBenchmarkSteps;
  std::uint64_t seed = 0;
  std::string csv;
};

int run_benchmark_cmd(const BenchmarkArgs& a) {
  std::vector<BenchmarkPair> pairs;
  for (const auto& spec : a.pairs) pairs.push_back(parse_benchmark_pair(spec));
  const auto rows = run_benchmark(pairs, a.steps, a.seed);
  fmt::print("{}", format_benchmark_table(rows));
  if (!a.csv.empty()) io::write_file(a.csv, format_benchmark_csv(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging_from_env();

  CLI::App app{"Tensor-train recurrent networks for tweet emotion classification.", "ttrnn"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "ttrnn 1.0.0");
  int exit_code = kExitOk;

  const std::string format_help = "Input format: csv, jsonl or auto (from the file extension)";

  CleanArgs clean;
  auto* c = app.add_subcommand("clean", "Normalize raw tweets into cleaned JSONL");
  c->add_option("--in", clean.in, "Raw dataset (CSV or JSONL with id, text, label)")->required();
  c->add_option("--out", clean.out, "Cleaned JSONL output")->required();
  c->add_option("--format", clean.format, format_help)->capture_default_str();
  c->callback([&] { exit_code = run_clean(clean); });

  FilterArgs filter;
  auto* f = app.add_subcommand("filter", "Keep examples whose external sentiment agrees with their label");
  f->add_option("--in", filter.in, "Cleaned JSONL or raw dataset")->required();
  f->add_option("--predictions", filter.predictions, "CSV with columns id,sentiment")->required();
  f->add_option("--out", filter.out, "Filtered cleaned JSONL output")->required();
  f->add_option("--format", filter.format, format_help)->capture_default_str();
  f->callback([&] { exit_code = run_filter(filter); });

  VocabArgs vocab;
  auto* v = app.add_subcommand("build-vocab", "Build a vocabulary file, one token per line");
  v->add_option("--in", vocab.in, "Cleaned JSONL or raw dataset")->required();
  v->add_option("--out", vocab.out, "Vocabulary output")->required();
  v->add_option("--format", vocab.format, format_help)->capture_default_str();
  v->add_option("--min-count", vocab.min_count, "Minimum token count")->capture_default_str();
  v->add_option("--max-size", vocab.max_size, "Maximum size including <pad> and <unk>")->capture_default_str();
  v->callback([&] { exit_code = run_build_vocab(vocab); });

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a recurrent classifier and write a model file");
  t->add_option("--data", tr.data, "Cleaned JSONL or raw dataset")->required();
  t->add_option("--format", tr.format, format_help)->capture_default_str();
  t->add_option("--cell", tr.cell, "elman, jordan, lstm, gru, t-rnn, t-lstm or t-gru")->required();
  t->add_option("--hidden", tr.hidden, "Hidden size H")->required();
  t->add_option("--embed", tr.embed, "Embedding size E")->required();
  t->add_option("--tt-modes", tr.tt_modes, "Output modes m1,m2,.. with product H (default: automatic, 3 cores)")
      ->delimiter(',');
  t->add_option("--tt-in-modes", tr.tt_in_modes, "Input modes n1,n2,.. with product E")->delimiter(',');
  t->add_option("--tt-ranks", tr.tt_ranks, "TT ranks: full (1,..,1), interior, or a single value")
      ->delimiter(',');
  t->add_option("--tt-rank", tr.config.tt_rank, "Interior rank used when --tt-ranks is absent")
      ->capture_default_str();
  t->add_option("--task", tr.task, "emotion (6 classes) or sentiment (2 classes)")->capture_default_str();
  t->add_option("--epochs", tr.config.epochs, "Maximum number of epochs")->capture_default_str();
  t->add_option("--patience", tr.config.patience, "Early-stop patience in epochs, 0 disables")
      ->capture_default_str();
  t->add_option("--batch", tr.config.batch_size, "Mini-batch size")->capture_default_str();
  t->add_option("--lr", tr.config.learning_rate, "Learning rate")->capture_default_str();
  t->add_option("--optimizer", tr.optimizer, "adam or sgd")->capture_default_str();
  t->add_option("--clip-norm", tr.config.clip_norm, "Global gradient-norm clip, 0 disables")
      ->capture_default_str();
  t->add_option("--input-dropout", tr.config.input_dropout, "Dropout rate on embedded tokens while training")
      ->capture_default_str();
  t->add_option("--seed", tr.config.seed, "Random seed for split, initialization and shuffling")
      ->capture_default_str();
  t->add_option("--split", tr.config.split_fraction, "Training fraction of the train/test split")
      ->capture_default_str();
  t->add_option("--validation", tr.config.validation_fraction,
                "Fraction of the training part held out for early stopping")
      ->capture_default_str();
  t->add_option("--max-len", tr.config.max_len, "Tokens per example after truncation and padding")
      ->capture_default_str();
  t->add_option("--min-count", tr.config.min_count, "Minimum token count for the vocabulary")
      ->capture_default_str();
  t->add_option("--max-vocab", tr.config.max_vocab, "Maximum vocabulary size")->capture_default_str();
  t->add_flag("--faithful-eq6", "Drop the bias on the GRU candidate gate");
  t->add_option("--threads", tr.config.threads, "Worker threads (results do not depend on it)")
      ->capture_default_str();
  t->add_option("--log", tr.log_path, "Epoch log (JSONL); default OUT.log.jsonl");
  t->add_flag("--log-timing", tr.config.log_timing, "Record wall-clock seconds per epoch in the log");
  t->add_option("--out", tr.out, "Model file output")->required();
  t->callback([&] {
    tr.config.gru_candidate_bias = t->count("--faithful-eq6") == 0;
    exit_code = run_train(tr);
  });

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score a model on a dataset");
  e->add_option("--model", ev.model, "Model file")->required();
  e->add_option("--data", ev.data, "Cleaned JSONL or raw dataset")->required();
  e->add_option("--format", ev.format, format_help)->capture_default_str();
  e->add_option("--split", ev.split, "test: the held-out part recorded in the model; all: every example")
      ->check(CLI::IsMember({"test", "all"}))
      ->capture_default_str();
  e->add_option("--threads", ev.threads, "Worker threads")->capture_default_str();
  e->callback([&] { exit_code = run_evaluate(ev); });

  PredictArgs pr;
  auto* p = app.add_subcommand("predict", "Classify one text");
  p->add_option("--model", pr.model, "Model file")->required();
  p->add_option("--text", pr.text, "Raw tweet text")->required();
  p->callback([&] { exit_code = run_predict(pr); });

  CompressArgs co;
  auto* m = app.add_subcommand("compress", "Decompose a dense matrix into tensor-train form");
  m->add_option("--matrix", co.matrix, "Binary (TTMX) or CSV matrix")->required();
  m->add_option("--modes", co.modes, "Row modes m1,m2,..")->required()->delimiter(',');
  m->add_option("--in-modes", co.in_modes, "Column modes n1,n2,..")->required()->delimiter(',');
  auto* ranks = m->add_option("--ranks", co.ranks, "Maximum ranks: full, interior, or a single value")
                    ->delimiter(',');
  m->add_option("--eps", co.eps, "Relative accuracy target instead of fixed ranks")->excludes(ranks);
  m->add_option("--out", co.out, "TT matrix output")->required();
  m->callback([&] { exit_code = run_compress(co); });

  BenchmarkArgs be;
  auto* b = app.add_subcommand("benchmark", "Compare dense and tensorized cells");
  b->add_option("--pairs", be.pairs, "DENSE:TT:H:E[:RANK], comma separated or repeated")
      ->required()
      ->delimiter(',');
  b->add_option("--steps", be.steps, "Timed steps per cell (at least 1000)")->capture_default_str();
  b->add_option("--seed", be.seed, "Weight seed")->capture_default_str();
  b->add_option("--csv", be.csv, "Also write the table as CSV");
  b->callback([&] { exit_code = run_benchmark_cmd(be); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& err) {
    fmt::print(stderr, "error: {}\n", err.what());
    return kExitUsage;
  } catch (const std::exception& err) {
    fmt::print(stderr, "internal error: {}\n", err.what());
    return kExitInternal;
  }
  return exit_code;
}
