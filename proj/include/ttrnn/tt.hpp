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
#include <span>
#include <string>
#include <vector>

#include "ttrnn/tensor.hpp"

namespace ttrnn::tt {

/// Splits an M x N matrix into d output modes (rows) and d input modes (cols):
/// prod(out_modes) = M, prod(in_modes) = N. Mode k of the tensorized matrix
/// has size p_k = out_modes[k] * in_modes[k].
class ModeFactorization {
 public:
  ModeFactorization(std::vector<std::size_t> out_modes, std::vector<std::size_t> in_modes);

  std::size_t order() const noexcept { return out_.size(); }
  const std::vector<std::size_t>& out_modes() const noexcept { return out_; }
  const std::vector<std::size_t>& in_modes() const noexcept { return in_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t mode_size(std::size_t k) const { return out_.at(k) * in_.at(k); }
  bool has_degenerate_mode() const noexcept;

  friend bool operator==(const ModeFactorization&, const ModeFactorization&) = default;

 private:
  std::vector<std::size_t> out_;
  std::vector<std::size_t> in_;
  std::size_t rows_ = 1;
  std::size_t cols_ = 1;
};

/// TT ranks r_0..r_d with r_0 = r_d = 1 and every r_k >= 1.
class RankVector {
 public:
  explicit RankVector(std::vector<std::size_t> ranks);

  /// [1, r, ..., r, 1] for a chain of `order` cores.
  static RankVector uniform(std::size_t order, std::size_t interior_rank);

  std::size_t size() const noexcept { return ranks_.size(); }
  std::size_t operator[](std::size_t k) const { return ranks_.at(k); }
  const std::vector<std::size_t>& values() const noexcept { return ranks_; }
  std::size_t max_interior() const noexcept;

  friend bool operator==(const RankVector&, const RankVector&) = default;

 private:
  std::vector<std::size_t> ranks_;
};

/// Shape of core k: [m_k, n_k, r_{k-1}, r_k].
Shape core_shape(const ModeFactorization& facto, const RankVector& ranks, std::size_t k);

/// Matrix in tensor-train format. Entry (row, col) with row = (i_1..i_d) and
/// col = (j_1..j_d) in row-major mode order is the 1x1 product
/// G_1[i_1, j_1] G_2[i_2, j_2] ... G_d[i_d, j_d] of r_{k-1} x r_k slices.
class TTMatrix {
 public:
  TTMatrix(ModeFactorization facto, RankVector ranks, std::vector<Tensor> cores);

  const ModeFactorization& factorization() const noexcept { return facto_; }
  const RankVector& ranks() const noexcept { return ranks_; }
  const std::vector<Tensor>& cores() const noexcept { return cores_; }
  const Tensor& core(std::size_t k) const { return cores_.at(k); }
  std::size_t order() const noexcept { return facto_.order(); }
  std::size_t rows() const noexcept { return facto_.rows(); }
  std::size_t cols() const noexcept { return facto_.cols(); }

  std::vector<const Tensor*> core_pointers() const;

 private:
  ModeFactorization facto_;
  RankVector ranks_;
  std::vector<Tensor> cores_;
};

/// Most balanced split of M and N into d factors each. Each side is chosen
/// independently: minimize max/min factor ratio, then the largest factor,
/// and list factors in non-increasing order. Logs a warning when a mode of
/// size 1 is unavoidable (e.g. M prime and d > 1).
ModeFactorization choose_factorization(std::size_t rows, std::size_t cols, std::size_t order);

/// Bijection between the combined mode index l_k in [0, m_k n_k) and the
/// (output, input) index pair: i = l / n_k, j = l - n_k * (l / n_k).
struct IndexPair {
  std::size_t out;
  std::size_t in;
};
IndexPair split_mode_index(std::size_t l, std::size_t in_mode) noexcept;
std::size_t join_mode_index(IndexPair ij, std::size_t in_mode) noexcept;

/// Left-to-right TT-SVD. Without limits every sweep keeps all singular values
/// above a 1e-13 relative floor, so reconstruction is exact to rounding.
TTMatrix tt_svd(const Tensor& w, const ModeFactorization& facto);
/// Realized ranks never exceed `max_ranks` (which must have length d + 1).
TTMatrix tt_svd(const Tensor& w, const ModeFactorization& facto, const RankVector& max_ranks);
/// Truncates so that ||reconstruct - W||_F <= eps ||W||_F.
TTMatrix tt_svd(const Tensor& w, const ModeFactorization& facto, double eps);

Tensor reconstruct(const TTMatrix& tt);

/// y = reconstruct(tt) x without materializing the matrix. Cores are folded in
/// right to left (core d first).
Tensor ttl_forward(const TTMatrix& tt, const Tensor& x);

struct TTGradients {
  std::vector<Tensor> cores;
  Tensor dx;
};

/// Gradients of L = dy . ttl_forward(tt, x) with respect to every core and x.
TTGradients ttl_backward(const TTMatrix& tt, const Tensor& x, const Tensor& dy);

std::size_t param_count(const ModeFactorization& facto, const RankVector& ranks);
std::size_t param_count(const TTMatrix& tt);
double compression_ratio(const TTMatrix& tt);

/// Multiply-accumulates performed by one ttl_forward under the right-to-left
/// order: sum_k (n_1..n_{k-1}) r_{k-1} m_k (m_{k+1}..m_d) n_k r_k.
std::uint64_t ttl_macs(const ModeFactorization& facto, const RankVector& ranks);

/// Per-core standard deviation for random initialization. Entry variance of
/// the reconstructed matrix is R * s^(2d) with R = prod(r_1..r_{d-1}), so
/// s = (2 / (M + N) / R)^(1 / (2d)) gives the Glorot variance 2 / (M + N).
double glorot_core_stddev(const ModeFactorization& facto, const RankVector& ranks);
TTMatrix random_tt(const ModeFactorization& facto, const RankVector& ranks, std::uint64_t seed);

/// Raw kernels shared by TTMatrix and the differentiable TT layer.
namespace kernel {

Tensor forward(const ModeFactorization& facto, const RankVector& ranks,
               std::span<const Tensor* const> cores, std::span<const double> x,
               std::uint64_t* macs = nullptr);

/// Accumulates (+=) into core_grads[k] and dx; either may be empty/null.
void backward(const ModeFactorization& facto, const RankVector& ranks,
              std::span<const Tensor* const> cores, std::span<const double> x,
              std::span<const double> dy, std::span<Tensor* const> core_grads,
              std::span<double> dx);

}  // namespace kernel

}  // namespace ttrnn::tt
