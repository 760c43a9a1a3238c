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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ttrnn/autodiff.hpp"
#include "ttrnn/tensor.hpp"
#include "ttrnn/tt.hpp"

namespace ttrnn {

enum class CellVariant { kElman, kJordan, kLstm, kGru, kTRnn, kTLstm, kTGru };

/// CLI spelling: elman, jordan, lstm, gru, t-rnn, t-lstm, t-gru.
std::string_view variant_name(CellVariant variant);
CellVariant parse_variant(std::string_view name);
bool is_tensorized(CellVariant variant);
/// Dense cell with the same equations (identity for dense variants).
CellVariant dense_twin(CellVariant variant);
CellVariant tensorized_twin(CellVariant variant);
/// 1 for Elman/Jordan/T-RNN, 3 for GRU (r, z, d), 4 for LSTM (k, f, o, g).
std::size_t gate_count(CellVariant variant);

struct TTConfig {
  tt::ModeFactorization facto;  // over the [hidden, input] input map
  tt::RankVector ranks;
};

struct CellSpec {
  CellVariant variant = CellVariant::kElman;
  std::size_t input_dim = 0;   // E
  std::size_t hidden_dim = 0;  // H
  std::size_t output_dim = 0;  // C
  std::optional<TTConfig> tt;  // present iff tensorized
  /// Bias on the GRU candidate; switched off by --faithful-eq6.
  bool gru_candidate_bias = true;

  /// Throws ConfigError on inconsistent dims or TT configuration.
  void validate() const;
};

using InputMap = std::variant<ad::Var, ad::TTLayer>;

/// Parameters of one cell plus its softmax output head.
struct CellWeights {
  CellSpec spec;
  std::vector<InputMap> input_maps;  // W per gate: H x E (dense) or TT
  std::vector<ad::Var> recurrent;    // U per gate: H x H (H x C for Jordan)
  std::vector<ad::Var> biases;       // b per gate; empty Var when disabled
  ad::Var head_w;                    // C x H
  ad::Var head_b;                    // C

  /// Glorot-scaled Gaussian weights (TT cores per tt::glorot_core_stddev),
  /// zero biases.
  static CellWeights initialize(const CellSpec& spec, std::uint64_t seed);
  static CellWeights zeros(const CellSpec& spec);

  /// All trainable tensors in a fixed declared order.
  std::vector<ad::Var> parameters() const;
  CellWeights clone() const;

  std::size_t input_map_param_count() const;
  std::size_t total_param_count() const;
};

/// Gate order inside CellWeights.
namespace gate {
inline constexpr std::size_t kGruReset = 0, kGruUpdate = 1, kGruCandidate = 2;
inline constexpr std::size_t kLstmInput = 0, kLstmForget = 1, kLstmOutput = 2, kLstmCandidate = 3;
}  // namespace gate

struct CellState {
  Tensor h;       // H
  Tensor c;       // H, used by LSTM variants
  Tensor y_prev;  // C, used by Jordan

  static CellState zeros(const CellSpec& spec);
};

struct TapedState {
  ad::Var h;
  ad::Var c;
  ad::Var y_prev;

  static TapedState zeros(const CellSpec& spec);
  static TapedState from(const CellState& state);
  CellState values() const;
};

TapedState step(ad::Tape& tape, const CellWeights& w, const ad::Var& x, const TapedState& state);
/// Unrolls left to right from the zero state; positions with padding[i] set
/// leave the state untouched.
TapedState run_sequence(ad::Tape& tape, const CellWeights& w, const std::vector<ad::Var>& inputs,
                        const std::vector<bool>& padding);
ad::Var classify(ad::Tape& tape, const CellWeights& w, const ad::Var& h);

CellState step(const CellWeights& w, const Tensor& x, const CellState& state);
CellState elman_step(const CellWeights& w, const Tensor& x, const CellState& state);
CellState jordan_step(const CellWeights& w, const Tensor& x, const CellState& state);
CellState lstm_step(const CellWeights& w, const Tensor& x, const CellState& state);
CellState gru_step(const CellWeights& w, const Tensor& x, const CellState& state);
CellState t_rnn_step(const CellWeights& w, const Tensor& x, const CellState& state);
CellState t_lstm_step(const CellWeights& w, const Tensor& x, const CellState& state);
CellState t_gru_step(const CellWeights& w, const Tensor& x, const CellState& state);

CellState run_sequence(const CellWeights& w, const std::vector<Tensor>& inputs,
                       const std::vector<bool>& padding);
/// softmax(W_y h + b_y).
Tensor classify(const CellWeights& w, const Tensor& h);
/// argmax with ties resolved to the lowest index.
std::size_t predicted_class(const Tensor& probs);

/// Builds the tensorized twin of a dense cell: every input map is replaced by
/// its unconstrained TT-SVD under `facto`; all other tensors are copied.
CellWeights tensorize(const CellWeights& dense, const tt::ModeFactorization& facto);

}  // namespace ttrnn
