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

#include <vector>

#include "ttrnn/tensor.hpp"

namespace ttrnn {

/// Thin singular value decomposition A = U diag(S) V^T of an m x n matrix,
/// with k = min(m, n): U is m x k, V is n x k, S is non-increasing.
struct ThinSvd {
  Tensor u;
  std::vector<double> s;
  Tensor v;
};

/// One-sided (Hestenes) Jacobi SVD. Columns of U belonging to exactly zero
/// singular values are zero rather than completed to an orthonormal basis.
ThinSvd thin_svd(const Tensor& a);

}  // namespace ttrnn
