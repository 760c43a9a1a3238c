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
#include <span>
#include <string_view>
#include <vector>

#include "ttrnn/autodiff.hpp"

namespace ttrnn {

enum class OptimizerKind { kSgd, kAdam };

std::string_view optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

/// w <- w - lr * g for every variable.
void sgd_step(std::span<const ad::Var> vars, double lr);

/// Rescales all gradients so their joint L2 norm is at most max_norm.
/// Returns the norm before clipping.
double clip_grad_norm(std::span<const ad::Var> vars, double max_norm);

/// Bias-corrected Adam with per-variable first and second moments. The
/// variable list must keep the same order and shapes across steps.
class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);

  void step(std::span<const ad::Var> vars);
  std::size_t steps_taken() const noexcept { return t_; }

 private:
  double lr_, beta1_, beta2_, epsilon_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

/// Uniform front end over both optimizers.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double lr) : kind_(kind), lr_(lr), adam_(lr) {}
  void step(std::span<const ad::Var> vars);

 private:
  OptimizerKind kind_;
  double lr_;
  Adam adam_;
};

}  // namespace ttrnn
