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

#include "ttrnn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ttrnn/error.hpp"

namespace ttrnn {

namespace {

constexpr int kMaxSweeps = 80;

// Orthogonalizes the columns of a tall matrix (rows >= cols). Columns are
// stored contiguously (column-major) to keep the rotation loops streaming.
ThinSvd jacobi_tall(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> work(m * n), vmat(n * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) work[j * m + i] = a.at(i, j);
  for (std::size_t j = 0; j < n; ++j) vmat[j * n + j] = 1.0;

  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(m);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* cp = &work[p * m];
        double* cq = &work[q * m];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += cp[i] * cp[i];
          beta += cq[i] * cq[i];
          gamma += cp[i] * cq[i];
        }
        if (gamma == 0.0 || std::fabs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = cp[i], y = cq[i];
          cp[i] = c * x - s * y;
          cq[i] = s * x + c * y;
        }
        double* vp = &vmat[p * n];
        double* vq = &vmat[q * n];
        for (std::size_t i = 0; i < n; ++i) {
          const double x = vp[i], y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += work[j * m + i] * work[j * m + i];
    norms[j] = std::sqrt(acc);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  ThinSvd out{Tensor(Shape{m, n}), std::vector<double>(n), Tensor(Shape{n, n})};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.s[k] = norms[j];
    const double inv = norms[j] > 0.0 ? 1.0 / norms[j] : 0.0;
    for (std::size_t i = 0; i < m; ++i) out.u.at(i, k) = work[j * m + i] * inv;
    for (std::size_t i = 0; i < n; ++i) out.v.at(i, k) = vmat[j * n + i];
  }
  return out;
}

}  // namespace

ThinSvd thin_svd(const Tensor& a) {
  if (a.rank() != 2) fail(ErrorCode::kShapeMismatch, "thin_svd needs a matrix");
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  ThinSvd t = jacobi_tall(transpose(a));
  return ThinSvd{std::move(t.v), std::move(t.s), std::move(t.u)};
}

}  // namespace ttrnn
