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

#include "ttrnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "ttrnn/error.hpp"
#include "ttrnn/rng.hpp"

namespace ttrnn {

Shape::Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  numel_ = 1;
  for (std::size_t d : dims_) {
    if (d == 0) fail(ErrorCode::kInvalidArgument, "shape dims must be >= 1, got " + to_string());
    numel_ *= d;
  }
}

std::string Shape::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) out << ',';
    out << dims_[i];
  }
  out << ']';
  return out.str();
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), data_(shape_.numel(), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_.numel()) {
    fail(ErrorCode::kShapeMismatch, "data length " + std::to_string(data_.size()) +
                                        " does not match shape " + shape_.to_string());
  }
}

Tensor Tensor::filled(Shape shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  return t;
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor(Shape{n}, std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor(Shape{rows, cols}, std::move(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) fail(ErrorCode::kShapeMismatch, "ragged matrix literal");
    values.insert(values.end(), row.begin(), row.end());
  }
  return matrix(r, c, std::move(values));
}

Tensor Tensor::identity(std::size_t n) {
  Tensor t(Shape{n, n});
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

std::size_t Tensor::rows() const {
  if (rank() != 2) fail(ErrorCode::kShapeMismatch, "rows() needs a matrix, got " + shape_.to_string());
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) fail(ErrorCode::kShapeMismatch, "cols() needs a matrix, got " + shape_.to_string());
  return shape_[1];
}

double Tensor::item() const {
  if (size() != 1) fail(ErrorCode::kNotScalar, "item() on tensor of shape " + shape_.to_string());
  return data_[0];
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!(a.shape() == b.shape())) {
    fail(ErrorCode::kShapeMismatch, std::string(op) + ": " + a.shape().to_string() + " vs " +
                                        b.shape().to_string());
  }
}

template <typename F>
Tensor zip(const Tensor& a, const Tensor& b, const char* op, F f) {
  check_same_shape(a, b, op);
  Tensor out(a.shape());
  auto o = out.mutable_data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = f(x[i], y[i]);
  return out;
}

template <typename F>
Tensor map(const Tensor& a, F f) {
  Tensor out(a.shape());
  auto o = out.mutable_data();
  auto x = a.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = f(x[i]);
  return out;
}

}  // namespace

Tensor reshape(const Tensor& t, Shape shape) {
  if (shape.numel() != t.size()) {
    fail(ErrorCode::kShapeMismatch, "cannot reshape " + t.shape().to_string() + " to " +
                                        shape.to_string());
  }
  return Tensor(std::move(shape), std::vector<double>(t.data().begin(), t.data().end()));
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows()) {
    fail(ErrorCode::kShapeMismatch, "matmul " + a.shape().to_string() + " x " +
                                        b.shape().to_string());
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  Tensor out(Shape{n, m});
  auto o = out.mutable_data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = x[i * k + p];
      const double* brow = &y[p * m];
      double* orow = &o[i * m];
      for (std::size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
    }
  }
  return out;
}

Tensor matvec(const Tensor& a, const Tensor& x) {
  if (a.rank() != 2 || x.rank() != 1 || a.cols() != x.size()) {
    fail(ErrorCode::kShapeMismatch, "matvec " + a.shape().to_string() + " x " +
                                        x.shape().to_string());
  }
  const std::size_t n = a.rows(), k = a.cols();
  Tensor out(Shape{n});
  auto w = a.data();
  auto v = x.data();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = &w[i * k];
    for (std::size_t j = 0; j < k; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  const std::size_t n = a.rows(), m = a.cols();
  Tensor out(Shape{m, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out.at(j, i) = a.at(i, j);
  return out;
}

Tensor outer(const Tensor& u, const Tensor& v) {
  if (u.rank() != 1 || v.rank() != 1) fail(ErrorCode::kShapeMismatch, "outer needs vectors");
  Tensor out(Shape{u.size(), v.size()});
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out.at(i, j) = u[i] * v[j];
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  return zip(a, b, "add", [](double x, double y) { return x + y; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return zip(a, b, "sub", [](double x, double y) { return x - y; });
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  return zip(a, b, "hadamard", [](double x, double y) { return x * y; });
}

Tensor scale(const Tensor& a, double factor) {
  return map(a, [factor](double x) { return x * factor; });
}

double stable_sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& a) { return map(a, stable_sigmoid); }

Tensor tanh(const Tensor& a) {
  return map(a, [](double x) { return std::tanh(x); });
}

Tensor random_init(Shape shape, double stddev, std::uint64_t seed) {
  if (!(stddev > 0.0) || !std::isfinite(stddev)) {
    fail(ErrorCode::kInvalidArgument, "random_init stddev must be > 0, got " + std::to_string(stddev));
  }
  Tensor out(std::move(shape));
  SplitMix64 rng(seed);
  for (double& v : out.mutable_data()) v = stddev * rng.normal();
  return out;
}

double frobenius_norm(const Tensor& t) {
  // Scaled accumulation keeps huge/tiny entries from overflowing.
  double largest = 0.0, ssq = 1.0;
  for (double v : t.data()) {
    if (v == 0.0) continue;
    const double a = std::fabs(v);
    if (largest < a) {
      ssq = 1.0 + ssq * (largest / a) * (largest / a);
      largest = a;
    } else {
      ssq += (a / largest) * (a / largest);
    }
  }
  return largest * std::sqrt(ssq);
}

double dot(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double relative_error(const Tensor& a, const Tensor& b) {
  const double diff = frobenius_norm(sub(a, b));
  const double ref = frobenius_norm(b);
  return ref > 0.0 ? diff / ref : diff;
}

}  // namespace ttrnn
