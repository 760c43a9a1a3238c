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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttrnn/cells.hpp"

namespace ttrnn {

/// A dense cell and its tensorized twin at the same sizes.
struct BenchmarkPair {
  CellVariant dense = CellVariant::kGru;
  CellVariant tensorized = CellVariant::kTGru;
  std::size_t hidden = 0;
  std::size_t input = 0;
  std::size_t rank = 4;   // interior TT rank
  std::size_t order = 3;  // number of TT cores
};

/// "DENSE:TT:H:E[:RANK]", e.g. "gru:t-gru:256:256". Throws ConfigError.
BenchmarkPair parse_benchmark_pair(std::string_view text);

struct BenchmarkRow {
  std::string pair;
  CellSpec spec;
  std::size_t input_map_params = 0;
  std::size_t total_params = 0;
  std::uint64_t input_map_macs = 0;  // per step, all gates
  std::uint64_t step_macs = 0;       // input maps plus recurrent maps
  double median_us = 0.0;
};

/// Multiply-accumulates of one recurrent step: every input map (H*E dense,
/// the TT contraction count otherwise) plus every recurrent matrix.
std::uint64_t input_map_macs(const CellSpec& spec);
std::uint64_t step_macs(const CellSpec& spec);

/// Times `steps` (>= 1000) steps of each cell after a warmup and reports the
/// median. Output size is fixed at 6 classes.
std::vector<BenchmarkRow> run_benchmark(std::span<const BenchmarkPair> pairs, std::size_t steps,
                                        std::uint64_t seed);

std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows);
std::string format_benchmark_csv(const std::vector<BenchmarkRow>& rows);

inline constexpr std::size_t kMinBenchmarkSteps = 1000;

}  // namespace ttrnn
