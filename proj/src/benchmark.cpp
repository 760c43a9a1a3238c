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

#include "ttrnn/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ttrnn/error.hpp"
#include "ttrnn/tensor.hpp"
#include "ttrnn/tt.hpp"

namespace ttrnn {

namespace {

constexpr std::size_t kBenchmarkClasses = 6;
constexpr std::size_t kWarmupSteps = 100;

std::size_t parse_size(std::string_view field, std::string_view text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || value == 0) {
    fail(ErrorCode::kConfigError, fmt::format("'{}' in pair '{}' is not a positive integer", field, text));
  }
  return value;
}

CellSpec make_spec(CellVariant variant, const BenchmarkPair& pair) {
  CellSpec spec;
  spec.variant = variant;
  spec.hidden_dim = pair.hidden;
  spec.input_dim = pair.input;
  spec.output_dim = kBenchmarkClasses;
  if (is_tensorized(variant)) {
    const auto facto = tt::choose_factorization(pair.hidden, pair.input, pair.order);
    spec.tt = TTConfig{facto, tt::RankVector::uniform(facto.order(), pair.rank)};
  }
  spec.validate();
  return spec;
}

double time_steps(const CellWeights& w, std::size_t steps, std::uint64_t seed) {
  const Tensor x = random_init(Shape{w.spec.input_dim}, 1.0, seed);
  CellState state = CellState::zeros(w.spec);
  for (std::size_t i = 0; i < kWarmupSteps; ++i) state = step(w, x, state);
  std::vector<double> micros(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    state = step(w, x, state);
    const auto t1 = std::chrono::steady_clock::now();
    micros[i] = std::chrono::duration<double, std::micro>(t1 - t0).count();
  }
  std::nth_element(micros.begin(), micros.begin() + static_cast<std::ptrdiff_t>(steps / 2), micros.end());
  return micros[steps / 2];
}

}  // namespace

BenchmarkPair parse_benchmark_pair(std::string_view text) {
  std::vector<std::string_view> parts;
  std::string_view rest = text;
  while (true) {
    const auto colon = rest.find(':');
    parts.push_back(rest.substr(0, colon));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  if (parts.size() != 4 && parts.size() != 5) {
    fail(ErrorCode::kConfigError, fmt::format("pair '{}' is not DENSE:TT:H:E[:RANK]", text));
  }
  BenchmarkPair pair;
  pair.dense = parse_variant(parts[0]);
  pair.tensorized = parse_variant(parts[1]);
  if (is_tensorized(pair.dense) || !is_tensorized(pair.tensorized) || dense_twin(pair.tensorized) != pair.dense) {
    fail(ErrorCode::kConfigError,
         fmt::format("pair '{}' must name a dense cell followed by its tensorized twin", text));
  }
  pair.hidden = parse_size(parts[2], text);
  pair.input = parse_size(parts[3], text);
  if (parts.size() == 5) pair.rank = parse_size(parts[4], text);
  return pair;
}

std::uint64_t input_map_macs(const CellSpec& spec) {
  const std::uint64_t per_gate = spec.tt ? tt::ttl_macs(spec.tt->facto, spec.tt->ranks)
                                         : std::uint64_t{spec.hidden_dim} * spec.input_dim;
  return per_gate * gate_count(spec.variant);
}

std::uint64_t step_macs(const CellSpec& spec) {
  const std::uint64_t recurrent_cols =
      spec.variant == CellVariant::kJordan ? spec.output_dim : spec.hidden_dim;
  return input_map_macs(spec) + std::uint64_t{spec.hidden_dim} * recurrent_cols * gate_count(spec.variant);
}

std::vector<BenchmarkRow> run_benchmark(std::span<const BenchmarkPair> pairs, std::size_t steps,
                                        std::uint64_t seed) {
  require(!pairs.empty(), ErrorCode::kConfigError, "benchmark needs at least one pair");
  require(steps >= kMinBenchmarkSteps, ErrorCode::kConfigError,
          fmt::format("benchmark needs at least {} steps, got {}", kMinBenchmarkSteps, steps));
  std::vector<BenchmarkRow> rows;
  for (const BenchmarkPair& pair : pairs) {
    const std::string label = fmt::format("{}/{} H={} E={}", variant_name(pair.dense),
                                          variant_name(pair.tensorized), pair.hidden, pair.input);
    for (CellVariant variant : {pair.dense, pair.tensorized}) {
      BenchmarkRow row;
      row.pair = label;
      row.spec = make_spec(variant, pair);
      const CellWeights w = CellWeights::initialize(row.spec, seed);
      row.input_map_params = w.input_map_param_count();
      row.total_params = w.total_param_count();
      row.input_map_macs = input_map_macs(row.spec);
      row.step_macs = step_macs(row.spec);
      row.median_us = time_steps(w, steps, seed + 1);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows) {
  std::string out = fmt::format("{:<26} {:<7} {:>16} {:>13} {:>16} {:>12} {:>12} {:>10}\n", "pair", "cell",
                                "input_map_params", "total_params", "input_map_macs", "step_macs",
                                "median_us", "tt_ranks");
  for (const BenchmarkRow& r : rows) {
    std::string ranks = "-";
    if (r.spec.tt) ranks = fmt::format("{}", fmt::join(r.spec.tt->ranks.values(), ","));
    out += fmt::format("{:<26} {:<7} {:>16} {:>13} {:>16} {:>12} {:>12.2f} {:>10}\n", r.pair,
                       variant_name(r.spec.variant), r.input_map_params, r.total_params, r.input_map_macs,
                       r.step_macs, r.median_us, ranks);
  }
  return out;
}

std::string format_benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out = "pair,cell,hidden,input,input_map_params,total_params,input_map_macs,step_macs,median_us\n";
  for (const BenchmarkRow& r : rows) {
    out += fmt::format("\"{}\",{},{},{},{},{},{},{},{:.3f}\n", r.pair, variant_name(r.spec.variant),
                       r.spec.hidden_dim, r.spec.input_dim, r.input_map_params, r.total_params,
                       r.input_map_macs, r.step_macs, r.median_us);
  }
  return out;
}

}  // namespace ttrnn
