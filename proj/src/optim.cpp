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

#include "ttrnn/optim.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ttrnn/error.hpp"

namespace ttrnn {

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  fail(ErrorCode::kConfigError, fmt::format("unknown optimizer '{}' (expected sgd or adam)", name));
}

void sgd_step(std::span<const ad::Var> vars, double lr) {
  for (const ad::Var& v : vars) {
    auto w = v.mutable_value().mutable_data();
    const auto g = v.grad().data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * g[i];
  }
}

double clip_grad_norm(std::span<const ad::Var> vars, double max_norm) {
  double sq = 0.0;
  for (const ad::Var& v : vars)
    for (double g : v.grad().data()) sq += g * g;
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (const ad::Var& v : vars)
      for (double& g : v.mutable_grad().mutable_data()) g *= factor;
  }
  return norm;
}

Adam::Adam(double lr, double beta1, double beta2, double epsilon)
    : lr_(lr), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

void Adam::step(std::span<const ad::Var> vars) {
  if (m_.empty()) {
    for (const ad::Var& v : vars) {
      m_.emplace_back(v.value().size(), 0.0);
      v_.emplace_back(v.value().size(), 0.0);
    }
  }
  require(m_.size() == vars.size(), ErrorCode::kInvalidArgument,
          fmt::format("Adam state tracks {} variables, step got {}", m_.size(), vars.size()));
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < vars.size(); ++k) {
    auto w = vars[k].mutable_value().mutable_data();
    const auto g = vars[k].grad().data();
    require(w.size() == m_[k].size(), ErrorCode::kShapeMismatch,
            fmt::format("variable {} changed size between Adam steps", k));
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      w[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + epsilon_);
    }
  }
}

void Optimizer::step(std::span<const ad::Var> vars) {
  if (kind_ == OptimizerKind::kSgd) {
    sgd_step(vars, lr_);
  } else {
    adam_.step(vars);
  }
}

}  // namespace ttrnn
