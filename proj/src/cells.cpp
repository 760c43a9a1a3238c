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

#include "ttrnn/cells.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ttrnn/error.hpp"
#include "ttrnn/rng.hpp"

namespace ttrnn {

std::string_view variant_name(CellVariant variant) {
  switch (variant) {
    case CellVariant::kElman: return "elman";
    case CellVariant::kJordan: return "jordan";
    case CellVariant::kLstm: return "lstm";
    case CellVariant::kGru: return "gru";
    case CellVariant::kTRnn: return "t-rnn";
    case CellVariant::kTLstm: return "t-lstm";
    case CellVariant::kTGru: return "t-gru";
  }
  return "?";
}

CellVariant parse_variant(std::string_view name) {
  for (CellVariant v : {CellVariant::kElman, CellVariant::kJordan, CellVariant::kLstm,
                        CellVariant::kGru, CellVariant::kTRnn, CellVariant::kTLstm,
                        CellVariant::kTGru}) {
    std::string alt(variant_name(v));
    std::replace(alt.begin(), alt.end(), '-', '_');
    if (name == variant_name(v) || name == alt) return v;
  }
  fail(ErrorCode::kConfigError, fmt::format("unknown cell variant '{}'", name));
}

bool is_tensorized(CellVariant variant) {
  return variant == CellVariant::kTRnn || variant == CellVariant::kTLstm ||
         variant == CellVariant::kTGru;
}

CellVariant dense_twin(CellVariant variant) {
  switch (variant) {
    case CellVariant::kTRnn: return CellVariant::kElman;
    case CellVariant::kTLstm: return CellVariant::kLstm;
    case CellVariant::kTGru: return CellVariant::kGru;
    default: return variant;
  }
}

CellVariant tensorized_twin(CellVariant variant) {
  switch (variant) {
    case CellVariant::kElman: return CellVariant::kTRnn;
    case CellVariant::kLstm: return CellVariant::kTLstm;
    case CellVariant::kGru: return CellVariant::kTGru;
    case CellVariant::kJordan:
      fail(ErrorCode::kConfigError, "the Jordan cell has no tensorized twin");
    default: return variant;
  }
}

std::size_t gate_count(CellVariant variant) {
  switch (dense_twin(variant)) {
    case CellVariant::kLstm: return 4;
    case CellVariant::kGru: return 3;
    default: return 1;
  }
}

void CellSpec::validate() const {
  if (input_dim == 0 || hidden_dim == 0 || output_dim == 0) {
    fail(ErrorCode::kConfigError,
         fmt::format("cell dims must be positive (E={}, H={}, C={})", input_dim, hidden_dim,
                     output_dim));
  }
  if (is_tensorized(variant) != tt.has_value()) {
    fail(ErrorCode::kConfigError,
         fmt::format("cell '{}' {} a TT configuration", variant_name(variant),
                     is_tensorized(variant) ? "requires" : "does not take"));
  }
  if (tt) {
    if (tt->facto.rows() != hidden_dim) {
      fail(ErrorCode::kConfigError,
           fmt::format("product of TT output modes is {} but hidden size is {}", tt->facto.rows(),
                       hidden_dim));
    }
    if (tt->facto.cols() != input_dim) {
      fail(ErrorCode::kConfigError,
           fmt::format("product of TT input modes is {} but input size is {}", tt->facto.cols(),
                       input_dim));
    }
    if (tt->ranks.size() != tt->facto.order() + 1) {
      fail(ErrorCode::kConfigError, fmt::format("TT rank vector has {} entries for order {}",
                                                tt->ranks.size(), tt->facto.order()));
    }
  }
}

namespace {

constexpr const char* kLstmGateNames[] = {"k", "f", "o", "g"};
constexpr const char* kGruGateNames[] = {"r", "z", "d"};

std::string gate_name(CellVariant variant, std::size_t g) {
  switch (dense_twin(variant)) {
    case CellVariant::kLstm: return kLstmGateNames[g];
    case CellVariant::kGru: return kGruGateNames[g];
    default: return "h";
  }
}

std::size_t recurrent_cols(const CellSpec& spec) {
  return spec.variant == CellVariant::kJordan ? spec.output_dim : spec.hidden_dim;
}

bool gate_has_bias(const CellSpec& spec, std::size_t g) {
  return !(dense_twin(spec.variant) == CellVariant::kGru && g == gate::kGruCandidate &&
           !spec.gru_candidate_bias);
}

double glorot_stddev(std::size_t fan_out, std::size_t fan_in) {
  return std::sqrt(2.0 / static_cast<double>(fan_in + fan_out));
}

template <typename MakeMatrix, typename MakeTT>
CellWeights build(const CellSpec& spec, MakeMatrix make_matrix, MakeTT make_tt) {
  spec.validate();
  CellWeights w;
  w.spec = spec;
  const std::size_t gates = gate_count(spec.variant);
  const std::size_t H = spec.hidden_dim, E = spec.input_dim, C = spec.output_dim;
  for (std::size_t g = 0; g < gates; ++g) {
    const std::string name = gate_name(spec.variant, g);
    if (spec.tt) {
      w.input_maps.emplace_back(ad::TTLayer::from_matrix(make_tt(*spec.tt), "W_" + name));
    } else {
      w.input_maps.emplace_back(ad::Var::parameter(make_matrix(H, E), "W_" + name));
    }
  }
  for (std::size_t g = 0; g < gates; ++g) {
    const std::string name = gate_name(spec.variant, g);
    w.recurrent.push_back(ad::Var::parameter(make_matrix(H, recurrent_cols(spec)), "U_" + name));
  }
  for (std::size_t g = 0; g < gates; ++g) {
    if (gate_has_bias(spec, g)) {
      w.biases.push_back(ad::Var::parameter(Tensor(Shape{H}), "b_" + gate_name(spec.variant, g)));
    } else {
      w.biases.emplace_back();
    }
  }
  w.head_w = ad::Var::parameter(make_matrix(C, H), "W_y");
  w.head_b = ad::Var::parameter(Tensor(Shape{C}), "b_y");
  return w;
}

}  // namespace

CellWeights CellWeights::initialize(const CellSpec& spec, std::uint64_t seed) {
  const SplitMix64 root(seed);
  std::uint64_t stream = 0;
  auto next_seed = [&] { return root.split(stream++).next_u64(); };
  return build(
      spec,
      [&](std::size_t rows, std::size_t cols) {
        return random_init(Shape{rows, cols}, glorot_stddev(rows, cols), next_seed());
      },
      [&](const TTConfig& cfg) { return tt::random_tt(cfg.facto, cfg.ranks, next_seed()); });
}

CellWeights CellWeights::zeros(const CellSpec& spec) {
  return build(
      spec, [](std::size_t rows, std::size_t cols) { return Tensor(Shape{rows, cols}); },
      [](const TTConfig& cfg) {
        std::vector<Tensor> cores;
        for (std::size_t k = 0; k < cfg.facto.order(); ++k)
          cores.emplace_back(tt::core_shape(cfg.facto, cfg.ranks, k));
        return tt::TTMatrix(cfg.facto, cfg.ranks, std::move(cores));
      });
}

std::vector<ad::Var> CellWeights::parameters() const {
  std::vector<ad::Var> out;
  for (const InputMap& map : input_maps) {
    if (const auto* dense = std::get_if<ad::Var>(&map)) {
      out.push_back(*dense);
    } else {
      const auto& layer = std::get<ad::TTLayer>(map);
      out.insert(out.end(), layer.cores.begin(), layer.cores.end());
    }
  }
  out.insert(out.end(), recurrent.begin(), recurrent.end());
  for (const ad::Var& b : biases)
    if (b) out.push_back(b);
  out.push_back(head_w);
  out.push_back(head_b);
  return out;
}

CellWeights CellWeights::clone() const {
  CellWeights copy;
  copy.spec = spec;
  for (const InputMap& map : input_maps) {
    if (const auto* dense = std::get_if<ad::Var>(&map)) {
      copy.input_maps.emplace_back(dense->clone());
    } else {
      copy.input_maps.emplace_back(std::get<ad::TTLayer>(map).clone());
    }
  }
  for (const ad::Var& u : recurrent) copy.recurrent.push_back(u.clone());
  for (const ad::Var& b : biases) copy.biases.push_back(b ? b.clone() : ad::Var{});
  copy.head_w = head_w.clone();
  copy.head_b = head_b.clone();
  return copy;
}

std::size_t CellWeights::input_map_param_count() const {
  std::size_t total = 0;
  for (const InputMap& map : input_maps) {
    if (const auto* dense = std::get_if<ad::Var>(&map)) {
      total += dense->value().size();
    } else {
      const auto& layer = std::get<ad::TTLayer>(map);
      total += tt::param_count(layer.facto, layer.ranks);
    }
  }
  return total;
}

std::size_t CellWeights::total_param_count() const {
  std::size_t total = 0;
  for (const ad::Var& p : parameters()) total += p.value().size();
  return total;
}

CellState CellState::zeros(const CellSpec& spec) {
  return CellState{Tensor(Shape{spec.hidden_dim}), Tensor(Shape{spec.hidden_dim}),
                   Tensor(Shape{spec.output_dim})};
}

TapedState TapedState::zeros(const CellSpec& spec) { return from(CellState::zeros(spec)); }

TapedState TapedState::from(const CellState& state) {
  return TapedState{ad::Var::constant(state.h), ad::Var::constant(state.c),
                    ad::Var::constant(state.y_prev)};
}

CellState TapedState::values() const { return CellState{h.value(), c.value(), y_prev.value()}; }

namespace {

ad::Var apply_input_map(ad::Tape& tape, const InputMap& map, const ad::Var& x) {
  if (const auto* dense = std::get_if<ad::Var>(&map)) return tape.matvec(*dense, x);
  return tape.ttl(std::get<ad::TTLayer>(map), x);
}

// W_g x + U_g feedback + b_g
ad::Var preactivation(ad::Tape& tape, const CellWeights& w, std::size_t g, const ad::Var& x,
                      const ad::Var& feedback) {
  return tape.add(apply_input_map(tape, w.input_maps[g], x),
                  tape.affine(w.recurrent[g], feedback, w.biases[g]));
}

TapedState elman(ad::Tape& tape, const CellWeights& w, const ad::Var& x, const TapedState& s) {
  ad::Var h = tape.tanh(preactivation(tape, w, 0, x, s.h));
  return TapedState{h, s.c, s.y_prev};
}

TapedState jordan(ad::Tape& tape, const CellWeights& w, const ad::Var& x, const TapedState& s) {
  ad::Var h = tape.tanh(preactivation(tape, w, 0, x, s.y_prev));
  ad::Var y = classify(tape, w, h);
  return TapedState{h, s.c, y};
}

TapedState lstm(ad::Tape& tape, const CellWeights& w, const ad::Var& x, const TapedState& s) {
  using namespace gate;
  ad::Var k = tape.sigmoid(preactivation(tape, w, kLstmInput, x, s.h));
  ad::Var f = tape.sigmoid(preactivation(tape, w, kLstmForget, x, s.h));
  ad::Var o = tape.sigmoid(preactivation(tape, w, kLstmOutput, x, s.h));
  ad::Var g = tape.tanh(preactivation(tape, w, kLstmCandidate, x, s.h));
  ad::Var c = tape.add(tape.hadamard(f, s.c), tape.hadamard(k, g));
  ad::Var h = tape.hadamard(o, tape.tanh(c));
  return TapedState{h, c, s.y_prev};
}

TapedState gru(ad::Tape& tape, const CellWeights& w, const ad::Var& x, const TapedState& s) {
  using namespace gate;
  ad::Var r = tape.sigmoid(preactivation(tape, w, kGruReset, x, s.h));
  ad::Var z = tape.sigmoid(preactivation(tape, w, kGruUpdate, x, s.h));
  ad::Var d = tape.tanh(preactivation(tape, w, kGruCandidate, x, tape.hadamard(r, s.h)));
  ad::Var h = tape.add(tape.hadamard(tape.one_minus(z), s.h), tape.hadamard(z, d));
  return TapedState{h, s.c, s.y_prev};
}

void check_input(const CellWeights& w, const ad::Var& x) {
  if (x.value().rank() != 1 || x.value().size() != w.spec.input_dim) {
    fail(ErrorCode::kShapeMismatch, fmt::format("cell input has shape {}, expected [{}]",
                                                x.shape().to_string(), w.spec.input_dim));
  }
}

void check_state(const CellWeights& w, const TapedState& s) {
  const CellSpec& spec = w.spec;
  if (s.h.value().size() != spec.hidden_dim || s.c.value().size() != spec.hidden_dim ||
      s.y_prev.value().size() != spec.output_dim) {
    fail(ErrorCode::kShapeMismatch, "cell state does not match the cell dimensions");
  }
}

}  // namespace

TapedState step(ad::Tape& tape, const CellWeights& w, const ad::Var& x, const TapedState& state) {
  check_input(w, x);
  check_state(w, state);
  switch (dense_twin(w.spec.variant)) {
    case CellVariant::kElman: return elman(tape, w, x, state);
    case CellVariant::kJordan: return jordan(tape, w, x, state);
    case CellVariant::kLstm: return lstm(tape, w, x, state);
    case CellVariant::kGru: return gru(tape, w, x, state);
    default: break;
  }
  fail(ErrorCode::kConfigError, "unreachable cell variant");
}

TapedState run_sequence(ad::Tape& tape, const CellWeights& w, const std::vector<ad::Var>& inputs,
                        const std::vector<bool>& padding) {
  if (padding.size() != inputs.size()) {
    fail(ErrorCode::kShapeMismatch, "padding mask length differs from sequence length");
  }
  if (std::find(padding.begin(), padding.end(), false) == padding.end()) {
    fail(ErrorCode::kEmptySequence, "sequence has no unpadded positions");
  }
  TapedState state = TapedState::zeros(w.spec);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    if (padding[t]) continue;
    state = step(tape, w, inputs[t], state);
  }
  return state;
}

ad::Var classify(ad::Tape& tape, const CellWeights& w, const ad::Var& h) {
  if (h.value().rank() != 1 || h.value().size() != w.spec.hidden_dim) {
    fail(ErrorCode::kShapeMismatch, fmt::format("classify input has shape {}, expected [{}]",
                                                h.shape().to_string(), w.spec.hidden_dim));
  }
  return tape.softmax(tape.affine(w.head_w, h, w.head_b));
}

CellState step(const CellWeights& w, const Tensor& x, const CellState& state) {
  ad::Tape tape;
  return step(tape, w, ad::Var::constant(x), TapedState::from(state)).values();
}

namespace {

CellState checked_step(CellVariant expected, const CellWeights& w, const Tensor& x,
                       const CellState& state) {
  if (w.spec.variant != expected) {
    fail(ErrorCode::kConfigError, fmt::format("{} step called with {} weights",
                                              variant_name(expected), variant_name(w.spec.variant)));
  }
  return step(w, x, state);
}

}  // namespace

CellState elman_step(const CellWeights& w, const Tensor& x, const CellState& state) {
  return checked_step(CellVariant::kElman, w, x, state);
}
CellState jordan_step(const CellWeights& w, const Tensor& x, const CellState& state) {
  return checked_step(CellVariant::kJordan, w, x, state);
}
CellState lstm_step(const CellWeights& w, const Tensor& x, const CellState& state) {
  return checked_step(CellVariant::kLstm, w, x, state);
}
CellState gru_step(const CellWeights& w, const Tensor& x, const CellState& state) {
  return checked_step(CellVariant::kGru, w, x, state);
}
CellState t_rnn_step(const CellWeights& w, const Tensor& x, const CellState& state) {
  return checked_step(CellVariant::kTRnn, w, x, state);
}
CellState t_lstm_step(const CellWeights& w, const Tensor& x, const CellState& state) {
  return checked_step(CellVariant::kTLstm, w, x, state);
}
CellState t_gru_step(const CellWeights& w, const Tensor& x, const CellState& state) {
  return checked_step(CellVariant::kTGru, w, x, state);
}

CellState run_sequence(const CellWeights& w, const std::vector<Tensor>& inputs,
                       const std::vector<bool>& padding) {
  ad::Tape tape;
  std::vector<ad::Var> vars;
  vars.reserve(inputs.size());
  for (const Tensor& x : inputs) vars.push_back(ad::Var::constant(x));
  return run_sequence(tape, w, vars, padding).values();
}

Tensor classify(const CellWeights& w, const Tensor& h) {
  ad::Tape tape;
  return classify(tape, w, ad::Var::constant(h)).value();
}

std::size_t predicted_class(const Tensor& probs) {
  if (probs.size() == 0) fail(ErrorCode::kShapeMismatch, "empty probability vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = i;
  return best;
}

CellWeights tensorize(const CellWeights& dense, const tt::ModeFactorization& facto) {
  if (is_tensorized(dense.spec.variant)) {
    fail(ErrorCode::kConfigError, "tensorize expects dense weights");
  }
  CellWeights out = dense.clone();
  out.spec.variant = tensorized_twin(dense.spec.variant);
  std::vector<std::size_t> max_ranks(facto.order() + 1, 1);
  for (std::size_t g = 0; g < out.input_maps.size(); ++g) {
    const auto& w = std::get<ad::Var>(dense.input_maps[g]);
    const tt::TTMatrix matrix = tt::tt_svd(w.value(), facto);
    for (std::size_t k = 0; k < max_ranks.size(); ++k)
      max_ranks[k] = std::max(max_ranks[k], matrix.ranks()[k]);
    out.input_maps[g] = ad::TTLayer::from_matrix(matrix, w.name());
  }
  out.spec.tt = TTConfig{facto, tt::RankVector(max_ranks)};
  out.spec.validate();
  return out;
}

}  // namespace ttrnn
