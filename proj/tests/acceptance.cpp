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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "gradient_check.hpp"
#include "ttrnn/cells.hpp"
#include "ttrnn/container.hpp"
#include "ttrnn/dataset_io.hpp"
#include "ttrnn/log.hpp"
#include "ttrnn/metrics.hpp"
#include "ttrnn/model.hpp"
#include "ttrnn/rng.hpp"
#include "ttrnn/train.hpp"
#include "ttrnn/tt.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ttrnn;
using Clock = std::chrono::steady_clock;

const fs::path kData = TTRNN_TEST_DATA;
const fs::path kSynthetic = fs::path(TTRNN_SOURCE_DIR) / "data" / "synthetic_6class.csv";

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> random_modes(std::size_t d, std::size_t max_product, std::mt19937_64& rng) {
  // Draws d modes in [1, 4] and shrinks until the product fits.
  std::uniform_int_distribution<std::size_t> pick(1, 4);
  std::vector<std::size_t> modes(d);
  for (auto& m : modes) m = pick(rng);
  auto product = [&] {
    std::size_t p = 1;
    for (auto m : modes) p *= m;
    return p;
  };
  while (product() > max_product)
    for (auto& m : modes)
      if (m > 1 && product() > max_product) --m;
  return modes;
}

Outcome tt_round_trip() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 3);
    const tt::ModeFactorization f(random_modes(d, 64, rng), random_modes(d, 64, rng));
    const Tensor w = random_init(Shape{f.rows(), f.cols()}, 1.0, 100 + static_cast<std::uint64_t>(i));
    worst = std::max(worst, relative_error(tt::reconstruct(tt::tt_svd(w, f)), w));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-10 && secs < 30.0, fmt::format("max relative error {:.3e}, {:.2f} s", worst, secs)};
}

Outcome ttl_equals_dense() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 4);
    const tt::ModeFactorization f(random_modes(d, 256, rng), random_modes(d, 256, rng));
    std::vector<std::size_t> ranks(d + 1, 1);
    for (std::size_t k = 1; k < d; ++k) ranks[k] = 1 + rng() % 4;
    const tt::TTMatrix m = tt::random_tt(f, tt::RankVector(ranks), 200 + static_cast<std::uint64_t>(i));
    const Tensor x = random_init(Shape{f.cols()}, 1.0, 900 + static_cast<std::uint64_t>(i));
    worst = std::max(worst, relative_error(tt::ttl_forward(m, x), matvec(tt::reconstruct(m), x)));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-10 && secs < 10.0, fmt::format("max relative error {:.3e}, {:.2f} s", worst, secs)};
}

CellSpec cell_spec(CellVariant v, std::size_t E, std::size_t H, std::size_t C, std::size_t rank) {
  CellSpec s;
  s.variant = v;
  s.input_dim = E;
  s.hidden_dim = H;
  s.output_dim = C;
  if (is_tensorized(v)) s.tt = TTConfig{tt::choose_factorization(H, E, 3), tt::RankVector::uniform(3, rank)};
  return s;
}

Outcome cell_equivalence() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (CellVariant dense : {CellVariant::kGru, CellVariant::kLstm, CellVariant::kElman}) {
    const CellSpec spec = cell_spec(dense, 24, 16, 6, 0);
    CellWeights w = CellWeights::initialize(spec, 7);
    for (const ad::Var& b : w.biases)
      if (b) b.mutable_value() = random_init(b.shape(), 0.3, 8);
    const CellWeights t = tensorize(w, tt::choose_factorization(16, 24, 3));
    CellState state = CellState::zeros(spec);
    for (std::uint64_t step_i = 0; step_i < 100; ++step_i) {
      const Tensor x = random_init(Shape{24}, 1.0, 1000 + step_i);
      const CellState a = step(w, x, state);
      const CellState b = step(t, x, state);
      worst = std::max({worst, max_abs_diff(a.h, b.h), max_abs_diff(a.c, b.c)});
      state = a;
    }
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-8 && secs < 30.0, fmt::format("max |h_tt - h_dense| {:.3e}, {:.2f} s", worst, secs)};
}

Outcome gradient_fidelity() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (CellVariant v : {CellVariant::kElman, CellVariant::kJordan, CellVariant::kLstm, CellVariant::kGru,
                        CellVariant::kTRnn, CellVariant::kTLstm, CellVariant::kTGru}) {
    CellWeights w = CellWeights::initialize(cell_spec(v, 8, 8, 3, 2), 11);
    for (const ad::Var& b : w.biases)
      if (b) b.mutable_value() = random_init(b.shape(), 0.3, 12);
    std::vector<Tensor> xs;
    for (std::uint64_t i = 0; i < 4; ++i) xs.push_back(random_init(Shape{8}, 1.0, 20 + i));
    worst = std::max(worst, testing::gradient_check(w.parameters(), [&](ad::Tape& tape, const auto&) {
      std::vector<ad::Var> inputs;
      for (const Tensor& x : xs) inputs.push_back(tape.constant(x));
      const TapedState s = run_sequence(tape, w, inputs, {false, false, false, false});
      return tape.cross_entropy(classify(tape, w, s.h), 2);
    }));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-4 && secs < 120.0, fmt::format("max relative error {:.3e}, {:.2f} s", worst, secs)};
}

Outcome parameter_reduction() {
  bool ok = true;
  std::string detail;
  const tt::ModeFactorization f = tt::choose_factorization(256, 256, 3);
  const std::size_t per_gate = tt::param_count(f, tt::RankVector::uniform(3, 4));
  ok = ok && per_gate == 1344;
  for (CellVariant t : {CellVariant::kTRnn, CellVariant::kTLstm, CellVariant::kTGru}) {
    const std::size_t tensorized = CellWeights::zeros(cell_spec(t, 256, 256, 6, 4)).input_map_param_count();
    const std::size_t dense = CellWeights::zeros(cell_spec(dense_twin(t), 256, 256, 6, 4)).input_map_param_count();
    ok = ok && tensorized * 40 <= dense && dense == 65536 * gate_count(t);
    detail += fmt::format("{} {} vs {}; ", variant_name(t), tensorized, dense);
  }
  return {ok, detail + fmt::format("per gate {} vs 65536, ratio {:.2f}", per_gate, 65536.0 / per_gate)};
}

Outcome comparable_accuracy() {
  const auto start = Clock::now();
  const auto data = io::load_clean_examples(kSynthetic);
  auto run = [&](CellVariant v) {
    TrainConfig c;
    c.variant = v;
    c.hidden_dim = 32;
    c.embed_dim = 32;
    c.tt_rank = 4;
    c.epochs = 100;
    c.seed = 1;
    return train(c, data).test_metrics.macro_f1;
  };
  const double tlstm = run(CellVariant::kTLstm), lstm = run(CellVariant::kLstm);
  const double tgru = run(CellVariant::kTGru), gru = run(CellVariant::kGru);
  const double secs = seconds_since(start);
  const bool ok = std::abs(tlstm - lstm) <= 0.03 && std::abs(tgru - gru) <= 0.03 && tlstm > 0.90 &&
                  tgru > 0.90 && secs <= 600.0;
  return {ok, fmt::format("test macro-F1 t-lstm {:.4f} lstm {:.4f} t-gru {:.4f} gru {:.4f}, {:.1f} s", tlstm,
                          lstm, tgru, gru, secs)};
}

Outcome metrics_oracle() {
  std::mt19937_64 rng(5);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const std::size_t C = 2 + rng() % 6, n = 1 + rng() % 200;
    std::vector<std::size_t> labels(n), preds(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = rng() % C;
      preds[i] = rng() % 2 ? labels[i] : rng() % C;
    }
    const MetricsReport r = compute_metrics(labels, preds, C);
    std::uint64_t correct = 0;
    for (std::size_t c = 0; c < C; ++c) {
      std::uint64_t tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += labels[i] == c && preds[i] == c;
        fp += labels[i] != c && preds[i] == c;
        fn += labels[i] == c && preds[i] != c;
      }
      correct += tp;
      const double p = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
      const double rc = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
      const double f = tp + fp + fn ? static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn) : 0.0;
      ok = ok && r.per_class[c].precision == p && r.per_class[c].recall == rc && r.per_class[c].f1 == f;
    }
    ok = ok && r.accuracy == static_cast<double>(correct) / static_cast<double>(n);
  }
  const ClassCounts example{6, 2, 3, 0};
  const double f1_value = f1_from_counts(example);
  ok = ok && std::abs(f1_value - 0.705882) <= 1e-6;
  return {ok, fmt::format("1000 sets exact, TP=6 FP=2 FN=3 gives F1 {:.6f}", f1_value)};
}

Outcome preprocessing_golden() {
  const auto raw = io::load_dataset(kData / "clean_fixture.csv", io::DataFormat::kCsv);
  std::vector<text::CleanExample> cleaned;
  for (const auto& r : raw) cleaned.push_back(text::clean_example(r));
  const std::string out = io::cleaned_to_jsonl(cleaned);
  const std::string golden = io::read_file(fs::path(TTRNN_SOURCE_DIR) / "tests" / "golden" / "clean_fixture.jsonl");
  bool ok = out == golden && text::clean_tweet("I'm happy").text == "i am happy";
  std::size_t emotions_seen = 0;
  for (text::Emotion e : text::kAllEmotions) {
    bool seen = false;
    for (const auto& c : cleaned) {
      if (c.emotion != e) continue;
      seen = true;
      const bool positive = e == text::Emotion::kHappy || e == text::Emotion::kSurprised;
      ok = ok && c.sentiment == (positive ? text::Sentiment::kPositive : text::Sentiment::kNegative);
    }
    emotions_seen += seen;
  }
  ok = ok && emotions_seen == 6;
  return {ok, fmt::format("{} records, golden {}, {} emotions mapped", cleaned.size(),
                          out == golden ? "identical" : "differs", emotions_seen)};
}

int run_cli(const std::vector<std::string>& args) {
  std::string cmd = TTRNN_CLI;
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism(const fs::path& dir) {
  auto train_once = [&](const std::string& name) {
    return run_cli({"train", "--data", kSynthetic.string(), "--cell", "t-lstm", "--hidden", "16", "--embed",
                    "16", "--epochs", "3", "--seed", "7", "--out", (dir / name).string()});
  };
  const int a = train_once("a.ttrnn"), b = train_once("b.ttrnn");
  if (a != 0 || b != 0) return {false, fmt::format("train exited {} and {}", a, b)};
  const bool same_model = io::read_file(dir / "a.ttrnn") == io::read_file(dir / "b.ttrnn");
  const bool same_log = io::read_file(dir / "a.ttrnn.log.jsonl") == io::read_file(dir / "b.ttrnn.log.jsonl");
  return {same_model && same_log, fmt::format("model files {}, logs {}", same_model ? "identical" : "differ",
                                              same_log ? "identical" : "differ")};
}

Outcome serialization(const fs::path& dir) {
  const fs::path path = dir / "a.ttrnn";
  if (!fs::exists(path)) return {false, "no model from the determinism run"};
  const Model m = load_model(path);
  save_model(m, dir / "resaved.ttrnn");
  const Model again = load_model(dir / "resaved.ttrnn");
  bool bitwise = io::read_file(path) == io::read_file(dir / "resaved.ttrnn");
  const auto pa = m.parameters(), pb = again.parameters();
  bitwise = bitwise && pa.size() == pb.size();
  for (std::size_t i = 0; bitwise && i < pa.size(); ++i) bitwise = pa[i].value() == pb[i].value();
  const MetricsReport r = evaluate_dataset(again, io::load_clean_examples(kSynthetic), true);
  const auto& stored = m.info.at("metrics");
  const bool metrics = r.macro_f1 == stored.at("macro_f1").get<double>() &&
                       r.micro_f1 == stored.at("micro_f1").get<double>() &&
                       r.accuracy == stored.at("accuracy").get<double>() &&
                       r.loss == stored.at("loss").get<double>();
  return {bitwise && metrics, fmt::format("weights {}, evaluate {} manifest metrics",
                                          bitwise ? "bitwise equal" : "differ", metrics ? "reproduces" : "differs from")};
}

}  // namespace

int main() {
  configure_logging_from_env();
  const fs::path dir = fs::temp_directory_path() / ("ttrnn_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"TT round-trip", tt_round_trip},
      {"TTL equals dense", ttl_equals_dense},
      {"cell equivalence", cell_equivalence},
      {"gradient fidelity", gradient_fidelity},
      {"parameter reduction", parameter_reduction},
      {"comparable accuracy", comparable_accuracy},
      {"metrics oracle", metrics_oracle},
      {"preprocessing golden files", preprocessing_golden},
      {"determinism", [&] { return determinism(dir); }},
      {"serialization", [&] { return serialization(dir); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(dir);
  return failures == 0 ? 0 : 1;
}
