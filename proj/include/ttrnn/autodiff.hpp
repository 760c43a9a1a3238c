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
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ttrnn/tensor.hpp"
#include "ttrnn/tt.hpp"

namespace ttrnn::ad {

struct Node {
  Tensor value;
  Tensor grad;  // same shape as value, zero until something flows back
  bool requires_grad = false;
  bool trainable = false;
  std::string name;
};

/// Shared handle to a value in the computation graph. Copies alias the same
/// node; use clone() for an independent parameter.
class Var {
 public:
  Var() = default;

  static Var parameter(Tensor value, std::string name);
  static Var constant(Tensor value);

  explicit operator bool() const noexcept { return node_ != nullptr; }

  const Tensor& value() const { return node_->value; }
  Tensor& mutable_value() const { return node_->value; }
  const Tensor& grad() const { return node_->grad; }
  Tensor& mutable_grad() const { return node_->grad; }
  const Shape& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_->requires_grad; }
  bool trainable() const { return node_->trainable; }
  const std::string& name() const { return node_->name; }

  /// Deep copy with a zeroed gradient.
  Var clone() const;

 private:
  friend class Tape;
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}
  std::shared_ptr<Node> node_;
};

/// Trainable tensor-train matrix: the cores are parameters.
struct TTLayer {
  tt::ModeFactorization facto;
  tt::RankVector ranks;
  std::vector<Var> cores;

  static TTLayer from_matrix(const tt::TTMatrix& matrix, const std::string& name);
  tt::TTMatrix to_matrix() const;
  TTLayer clone() const;
};

/// Define-by-run record of executed operations. Built fresh for every
/// forward pass; backward() replays it in reverse.
class Tape {
 public:
  Var constant(Tensor value) { return Var::constant(std::move(value)); }

  /// Row `id` of a [vocab, E] table.
  Var embed(const Var& table, std::size_t id);
  /// w x + b for w [M, N], x [N]; `b` may be empty.
  Var affine(const Var& w, const Var& x, const Var& b);
  Var matvec(const Var& w, const Var& x) { return affine(w, x, Var{}); }
  Var ttl(const TTLayer& layer, const Var& x);

  Var sigmoid(const Var& x);
  Var tanh(const Var& x);
  Var hadamard(const Var& a, const Var& b);
  Var add(const Var& a, const Var& b);
  Var one_minus(const Var& x);
  Var scale(const Var& x, double factor);
  Var softmax(const Var& x);
  Var concat_last(const Var& a, const Var& b);
  /// Sum of scalars.
  Var sum(std::span<const Var> scalars);
  /// -log(probs[label] + 1e-12).
  Var cross_entropy(const Var& probs, std::size_t label);

  /// Accumulates d(loss)/d(v) into every parameter reachable from `loss`.
  /// Intermediate gradients are reset first, so calling it twice adds the
  /// parameter gradients twice.
  void backward(const Var& loss);

  std::size_t size() const noexcept { return entries_.size(); }
  void clear() { entries_.clear(); }

 private:
  struct Entry {
    std::shared_ptr<Node> out;
    std::function<void(Node& out)> backward;
  };

  Var record(Tensor value, bool requires_grad, std::function<void(Node&)> backward);

  std::vector<Entry> entries_;
};

void zero_grads(std::span<const Var> vars);

constexpr double kCrossEntropyEpsilon = 1e-12;

}  // namespace ttrnn::ad
