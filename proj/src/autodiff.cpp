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

#include "ttrnn/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ttrnn/error.hpp"

namespace ttrnn::ad {

Var Var::parameter(Tensor value, std::string name) {
  auto node = std::make_shared<Node>();
  node->grad = Tensor(value.shape());
  node->value = std::move(value);
  node->requires_grad = true;
  node->trainable = true;
  node->name = std::move(name);
  return Var(std::move(node));
}

Var Var::constant(Tensor value) {
  auto node = std::make_shared<Node>();
  node->grad = Tensor(value.shape());
  node->value = std::move(value);
  return Var(std::move(node));
}

Var Var::clone() const {
  auto node = std::make_shared<Node>(*node_);
  node->grad.fill(0.0);
  return Var(std::move(node));
}

TTLayer TTLayer::from_matrix(const tt::TTMatrix& matrix, const std::string& name) {
  TTLayer layer{matrix.factorization(), matrix.ranks(), {}};
  for (std::size_t k = 0; k < matrix.order(); ++k) {
    layer.cores.push_back(Var::parameter(matrix.core(k), fmt::format("{}.core{}", name, k)));
  }
  return layer;
}

tt::TTMatrix TTLayer::to_matrix() const {
  std::vector<Tensor> values;
  for (const Var& c : cores) values.push_back(c.value());
  return tt::TTMatrix(facto, ranks, std::move(values));
}

TTLayer TTLayer::clone() const {
  TTLayer copy{facto, ranks, {}};
  for (const Var& c : cores) copy.cores.push_back(c.clone());
  return copy;
}

namespace {

void check_same(const Var& a, const Var& b, const char* op) {
  if (!(a.shape() == b.shape())) {
    fail(ErrorCode::kShapeMismatch,
         fmt::format("{}: {} vs {}", op, a.shape().to_string(), b.shape().to_string()));
  }
}

void accumulate(Tensor& target, const Tensor& delta) {
  auto t = target.mutable_data();
  auto d = delta.data();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += d[i];
}

}  // namespace

Var Tape::record(Tensor value, bool requires_grad, std::function<void(Node&)> backward) {
  Var out = Var::constant(std::move(value));
  if (requires_grad) {
    out.node_->requires_grad = true;
    entries_.push_back(Entry{out.node_, std::move(backward)});
  }
  return out;
}

Var Tape::embed(const Var& table, std::size_t id) {
  const Tensor& t = table.value();
  if (t.rank() != 2) fail(ErrorCode::kShapeMismatch, "embedding table must be a matrix");
  const std::size_t rows = t.rows(), width = t.cols();
  if (id >= rows) {
    fail(ErrorCode::kInvalidArgument, fmt::format("token id {} outside vocabulary of {}", id, rows));
  }
  Tensor row(Shape{width});
  std::copy_n(t.data().begin() + static_cast<std::ptrdiff_t>(id * width), width,
              row.mutable_data().begin());
  return record(std::move(row), table.requires_grad(), [table, id, width](Node& out) mutable {
    auto g = table.mutable_grad().mutable_data();
    for (std::size_t j = 0; j < width; ++j) g[id * width + j] += out.grad[j];
  });
}

Var Tape::affine(const Var& w, const Var& x, const Var& b) {
  Tensor y = ttrnn::matvec(w.value(), x.value());
  if (b) {
    if (!(b.shape() == y.shape())) {
      fail(ErrorCode::kShapeMismatch, fmt::format("affine bias {} for output {}",
                                                  b.shape().to_string(), y.shape().to_string()));
    }
    auto yd = y.mutable_data();
    auto bd = b.value().data();
    for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += bd[i];
  }
  const bool needs = w.requires_grad() || x.requires_grad() || (b && b.requires_grad());
  return record(std::move(y), needs, [w, x, b](Node& out) mutable {
    const std::size_t rows = w.value().rows(), cols = w.value().cols();
    const auto dy = out.grad.data();
    if (w.requires_grad()) {
      auto gw = w.mutable_grad().mutable_data();
      const auto xv = x.value().data();
      for (std::size_t i = 0; i < rows; ++i) {
        const double d = dy[i];
        if (d == 0.0) continue;
        double* row = &gw[i * cols];
        for (std::size_t j = 0; j < cols; ++j) row[j] += d * xv[j];
      }
    }
    if (x.requires_grad()) {
      auto gx = x.mutable_grad().mutable_data();
      const auto wv = w.value().data();
      for (std::size_t i = 0; i < rows; ++i) {
        const double d = dy[i];
        if (d == 0.0) continue;
        const double* row = &wv[i * cols];
        for (std::size_t j = 0; j < cols; ++j) gx[j] += d * row[j];
      }
    }
    if (b && b.requires_grad()) accumulate(b.mutable_grad(), out.grad);
  });
}

Var Tape::ttl(const TTLayer& layer, const Var& x) {
  if (x.value().rank() != 1) fail(ErrorCode::kShapeMismatch, "ttl needs a vector input");
  std::vector<const Tensor*> cores;
  bool needs = x.requires_grad();
  for (const Var& c : layer.cores) {
    cores.push_back(&c.value());
    needs = needs || c.requires_grad();
  }
  Tensor y = tt::kernel::forward(layer.facto, layer.ranks, cores, x.value().data());
  return record(std::move(y), needs, [layer, x](Node& out) mutable {
    std::vector<const Tensor*> values;
    std::vector<Tensor*> grads;
    for (const Var& c : layer.cores) {
      values.push_back(&c.value());
      grads.push_back(c.requires_grad() ? &c.mutable_grad() : nullptr);
    }
    std::span<double> dx;
    if (x.requires_grad()) dx = x.mutable_grad().mutable_data();
    tt::kernel::backward(layer.facto, layer.ranks, values, x.value().data(), out.grad.data(), grads,
                         dx);
  });
}

Var Tape::sigmoid(const Var& x) {
  Tensor y = ttrnn::sigmoid(x.value());
  return record(std::move(y), x.requires_grad(), [x](Node& out) mutable {
    auto g = x.mutable_grad().mutable_data();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = out.value[i];
      g[i] += out.grad[i] * s * (1.0 - s);
    }
  });
}

Var Tape::tanh(const Var& x) {
  Tensor y = ttrnn::tanh(x.value());
  return record(std::move(y), x.requires_grad(), [x](Node& out) mutable {
    auto g = x.mutable_grad().mutable_data();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = out.value[i];
      g[i] += out.grad[i] * (1.0 - t * t);
    }
  });
}

Var Tape::hadamard(const Var& a, const Var& b) {
  check_same(a, b, "hadamard");
  Tensor y = ttrnn::hadamard(a.value(), b.value());
  return record(std::move(y), a.requires_grad() || b.requires_grad(), [a, b](Node& out) mutable {
    if (a.requires_grad()) {
      auto g = a.mutable_grad().mutable_data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i] * b.value()[i];
    }
    if (b.requires_grad()) {
      auto g = b.mutable_grad().mutable_data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i] * a.value()[i];
    }
  });
}

Var Tape::add(const Var& a, const Var& b) {
  check_same(a, b, "add");
  Tensor y = ttrnn::add(a.value(), b.value());
  return record(std::move(y), a.requires_grad() || b.requires_grad(), [a, b](Node& out) mutable {
    if (a.requires_grad()) accumulate(a.mutable_grad(), out.grad);
    if (b.requires_grad()) accumulate(b.mutable_grad(), out.grad);
  });
}

Var Tape::one_minus(const Var& x) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.0 - x.value()[i];
  return record(std::move(y), x.requires_grad(), [x](Node& out) mutable {
    auto g = x.mutable_grad().mutable_data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= out.grad[i];
  });
}

Var Tape::scale(const Var& x, double factor) {
  Tensor y = ttrnn::scale(x.value(), factor);
  return record(std::move(y), x.requires_grad(), [x, factor](Node& out) mutable {
    auto g = x.mutable_grad().mutable_data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += factor * out.grad[i];
  });
}

Var Tape::softmax(const Var& x) {
  if (x.value().rank() != 1) fail(ErrorCode::kShapeMismatch, "softmax needs a vector");
  const auto z = x.value().data();
  const double shift = *std::max_element(z.begin(), z.end());
  Tensor p(x.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(z[i] - shift);
    total += p[i];
  }
  for (std::size_t i = 0; i < p.size(); ++i) p[i] /= total;
  return record(std::move(p), x.requires_grad(), [x](Node& out) mutable {
    double inner = 0.0;
    for (std::size_t i = 0; i < out.value.size(); ++i) inner += out.grad[i] * out.value[i];
    auto g = x.mutable_grad().mutable_data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.value[i] * (out.grad[i] - inner);
  });
}

Var Tape::concat_last(const Var& a, const Var& b) {
  if (a.value().rank() != 1 || b.value().rank() != 1) {
    fail(ErrorCode::kShapeMismatch, "concat_last supports vectors");
  }
  const std::size_t na = a.value().size(), nb = b.value().size();
  std::vector<double> joined(a.value().data().begin(), a.value().data().end());
  joined.insert(joined.end(), b.value().data().begin(), b.value().data().end());
  return record(Tensor::vector(std::move(joined)), a.requires_grad() || b.requires_grad(),
                [a, b, na, nb](Node& out) mutable {
                  if (a.requires_grad()) {
                    auto g = a.mutable_grad().mutable_data();
                    for (std::size_t i = 0; i < na; ++i) g[i] += out.grad[i];
                  }
                  if (b.requires_grad()) {
                    auto g = b.mutable_grad().mutable_data();
                    for (std::size_t i = 0; i < nb; ++i) g[i] += out.grad[na + i];
                  }
                });
}

Var Tape::sum(std::span<const Var> scalars) {
  double total = 0.0;
  bool needs = false;
  for (const Var& s : scalars) {
    if (s.value().size() != 1) fail(ErrorCode::kNotScalar, "sum expects scalars");
    total += s.value()[0];
    needs = needs || s.requires_grad();
  }
  std::vector<Var> inputs(scalars.begin(), scalars.end());
  return record(Tensor::scalar(total), needs, [inputs](Node& out) mutable {
    for (Var& s : inputs)
      if (s.requires_grad()) s.mutable_grad()[0] += out.grad[0];
  });
}

Var Tape::cross_entropy(const Var& probs, std::size_t label) {
  const Tensor& p = probs.value();
  if (p.rank() != 1) fail(ErrorCode::kShapeMismatch, "cross_entropy needs a probability vector");
  if (label >= p.size()) {
    fail(ErrorCode::kLabelOutOfRange,
         fmt::format("label {} outside [0, {})", label, p.size()));
  }
  double total = 0.0;
  for (double v : p.data()) total += v;
  if (std::fabs(total - 1.0) > 1e-9) {
    fail(ErrorCode::kInvalidArgument, fmt::format("probabilities sum to {}, not 1", total));
  }
  const double q = p[label] + kCrossEntropyEpsilon;
  return record(Tensor::scalar(-std::log(q)), probs.requires_grad(),
                [probs, label, q](Node& out) mutable {
                  probs.mutable_grad()[label] -= out.grad[0] / q;
                });
}

void Tape::backward(const Var& loss) {
  if (!loss) fail(ErrorCode::kInvalidArgument, "backward on an empty variable");
  if (loss.value().size() != 1) {
    fail(ErrorCode::kNotScalar, "backward needs a scalar loss, got shape " +
                                    loss.shape().to_string());
  }
  for (Entry& e : entries_) e.out->grad.fill(0.0);
  loss.node_->grad[0] += 1.0;
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) it->backward(*it->out);
}

void zero_grads(std::span<const Var> vars) {
  for (const Var& v : vars) v.mutable_grad().fill(0.0);
}

}  // namespace ttrnn::ad
