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

#include "ttrnn/tt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ttrnn/error.hpp"
#include "ttrnn/linalg.hpp"
#include "ttrnn/log.hpp"
#include "ttrnn/rng.hpp"

namespace ttrnn::tt {

ModeFactorization::ModeFactorization(std::vector<std::size_t> out_modes,
                                     std::vector<std::size_t> in_modes)
    : out_(std::move(out_modes)), in_(std::move(in_modes)) {
  if (out_.empty() || out_.size() != in_.size()) {
    fail(ErrorCode::kInvalidArgument,
         fmt::format("mode factorization needs equal, nonzero orders (got {} and {})",
                     out_.size(), in_.size()));
  }
  for (std::size_t k = 0; k < out_.size(); ++k) {
    if (out_[k] == 0 || in_[k] == 0) fail(ErrorCode::kInvalidArgument, "modes must be >= 1");
    rows_ *= out_[k];
    cols_ *= in_[k];
  }
}

bool ModeFactorization::has_degenerate_mode() const noexcept {
  if (order() == 1) return false;
  for (std::size_t k = 0; k < order(); ++k)
    if (out_[k] == 1 || in_[k] == 1) return true;
  return false;
}

RankVector::RankVector(std::vector<std::size_t> ranks) : ranks_(std::move(ranks)) {
  if (ranks_.size() < 2) fail(ErrorCode::kInvalidRank, "rank vector needs at least r_0 and r_d");
  if (ranks_.front() != 1 || ranks_.back() != 1) {
    fail(ErrorCode::kInvalidRank,
         fmt::format("boundary ranks must be 1, got {}", fmt::join(ranks_, ",")));
  }
  for (std::size_t r : ranks_)
    if (r == 0) fail(ErrorCode::kInvalidRank, fmt::format("zero rank in {}", fmt::join(ranks_, ",")));
}

RankVector RankVector::uniform(std::size_t order, std::size_t interior_rank) {
  std::vector<std::size_t> r(order + 1, interior_rank);
  r.front() = 1;
  r.back() = 1;
  return RankVector(std::move(r));
}

std::size_t RankVector::max_interior() const noexcept {
  std::size_t m = 1;
  for (std::size_t k = 1; k + 1 < ranks_.size(); ++k) m = std::max(m, ranks_[k]);
  return m;
}

Shape core_shape(const ModeFactorization& facto, const RankVector& ranks, std::size_t k) {
  return Shape{facto.out_modes()[k], facto.in_modes()[k], ranks[k], ranks[k + 1]};
}

namespace {

void check_ranks_match(const ModeFactorization& facto, const RankVector& ranks) {
  if (ranks.size() != facto.order() + 1) {
    fail(ErrorCode::kInvalidRank, fmt::format("rank vector of length {} for order {}",
                                              ranks.size(), facto.order()));
  }
}

}  // namespace

TTMatrix::TTMatrix(ModeFactorization facto, RankVector ranks, std::vector<Tensor> cores)
    : facto_(std::move(facto)), ranks_(std::move(ranks)), cores_(std::move(cores)) {
  check_ranks_match(facto_, ranks_);
  if (cores_.size() != facto_.order()) {
    fail(ErrorCode::kShapeMismatch,
         fmt::format("{} cores for order {}", cores_.size(), facto_.order()));
  }
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    const Shape expected = core_shape(facto_, ranks_, k);
    if (!(cores_[k].shape() == expected)) {
      fail(ErrorCode::kShapeMismatch, fmt::format("core {} has shape {}, expected {}", k,
                                                  cores_[k].shape().to_string(),
                                                  expected.to_string()));
    }
  }
}

std::vector<const Tensor*> TTMatrix::core_pointers() const {
  std::vector<const Tensor*> out;
  out.reserve(cores_.size());
  for (const Tensor& c : cores_) out.push_back(&c);
  return out;
}

// ---------------------------------------------------------------------------
// Factorization choice

namespace {

struct Candidate {
  std::vector<std::size_t> factors;  // non-increasing
};

// True when `a` is strictly more balanced than `b`.
bool more_balanced(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  // Compare max_a / min_a < max_b / min_b without division.
  const unsigned __int128 lhs = static_cast<unsigned __int128>(a.front()) * b.back();
  const unsigned __int128 rhs = static_cast<unsigned __int128>(b.front()) * a.back();
  if (lhs != rhs) return lhs < rhs;
  if (a.front() != b.front()) return a.front() < b.front();
  return a < b;
}

void enumerate_factors(std::size_t remaining, std::size_t slots, std::size_t cap,
                       std::vector<std::size_t>& prefix,
                       const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (slots == 1) {
    if (remaining <= cap) {
      prefix.push_back(remaining);
      visit(prefix);
      prefix.pop_back();
    }
    return;
  }
  for (std::size_t f = std::min(cap, remaining); f >= 1; --f) {
    if (remaining % f != 0) continue;
    prefix.push_back(f);
    enumerate_factors(remaining / f, slots - 1, f, prefix, visit);
    prefix.pop_back();
  }
}

std::vector<std::size_t> balanced_factors(std::size_t value, std::size_t order) {
  std::vector<std::size_t> best, prefix;
  enumerate_factors(value, order, value, prefix, [&](const std::vector<std::size_t>& f) {
    if (best.empty() || more_balanced(f, best)) best = f;
  });
  return best;
}

}  // namespace

ModeFactorization choose_factorization(std::size_t rows, std::size_t cols, std::size_t order) {
  if (rows == 0 || cols == 0 || order == 0) {
    fail(ErrorCode::kInvalidArgument,
         fmt::format("choose_factorization needs M, N, d >= 1 (got {}, {}, {})", rows, cols, order));
  }
  ModeFactorization facto(balanced_factors(rows, order), balanced_factors(cols, order));
  if (facto.has_degenerate_mode()) {
    log().warn("degenerate TT mode for {}x{} at order {}: out modes {}, in modes {}", rows, cols,
               order, fmt::join(facto.out_modes(), ","), fmt::join(facto.in_modes(), ","));
  }
  return facto;
}

IndexPair split_mode_index(std::size_t l, std::size_t in_mode) noexcept {
  const std::size_t i = l / in_mode;
  return {i, l - in_mode * i};
}

std::size_t join_mode_index(IndexPair ij, std::size_t in_mode) noexcept {
  return ij.out * in_mode + ij.in;
}

// ---------------------------------------------------------------------------
// Dense <-> tensorized index maps

namespace {

// Visits every (row, col) of the M x N matrix together with the linear index
// of the same entry in the [p_1, ..., p_d] tensor (row-major, l_k = i_k n_k + j_k).
template <typename F>
void for_each_entry(const ModeFactorization& facto, F&& f) {
  const std::size_t d = facto.order();
  const auto& m = facto.out_modes();
  const auto& n = facto.in_modes();
  std::vector<std::size_t> pstride(d);
  std::size_t s = 1;
  for (std::size_t k = d; k-- > 0;) {
    pstride[k] = s;
    s *= m[k] * n[k];
  }
  std::vector<std::size_t> row_part(facto.rows()), col_part(facto.cols());
  for (std::size_t row = 0; row < facto.rows(); ++row) {
    std::size_t rem = row, lin = 0;
    for (std::size_t k = d; k-- > 0;) {
      const std::size_t i = rem % m[k];
      rem /= m[k];
      lin += i * n[k] * pstride[k];
    }
    row_part[row] = lin;
  }
  for (std::size_t col = 0; col < facto.cols(); ++col) {
    std::size_t rem = col, lin = 0;
    for (std::size_t k = d; k-- > 0;) {
      const std::size_t j = rem % n[k];
      rem /= n[k];
      lin += j * pstride[k];
    }
    col_part[col] = lin;
  }
  for (std::size_t row = 0; row < facto.rows(); ++row)
    for (std::size_t col = 0; col < facto.cols(); ++col) f(row, col, row_part[row] + col_part[col]);
}

enum class TruncationMode { kExact, kMaxRanks, kTolerance };

struct TruncationPolicy {
  TruncationMode mode = TruncationMode::kExact;
  const RankVector* max_ranks = nullptr;
  double eps = 0.0;
};

constexpr double kRelativeFloor = 1e-13;

std::size_t choose_rank(const std::vector<double>& s, std::size_t k, const TruncationPolicy& policy,
                        double sweep_tolerance) {
  std::size_t r = 0;
  const double floor = kRelativeFloor * (s.empty() ? 0.0 : s.front());
  while (r < s.size() && s[r] > floor) ++r;
  if (policy.mode == TruncationMode::kMaxRanks) {
    r = std::min(r, (*policy.max_ranks)[k + 1]);
  } else if (policy.mode == TruncationMode::kTolerance) {
    // Smallest r whose discarded tail has norm <= sweep_tolerance.
    double tail = 0.0;
    std::size_t keep = s.size();
    while (keep > 0) {
      const double next = tail + s[keep - 1] * s[keep - 1];
      if (std::sqrt(next) > sweep_tolerance) break;
      tail = next;
      --keep;
    }
    r = std::min(r, keep);
  }
  return std::max<std::size_t>(r, 1);
}

TTMatrix tt_svd_impl(const Tensor& w, const ModeFactorization& facto,
                     const TruncationPolicy& policy) {
  if (w.rank() != 2 || w.rows() != facto.rows() || w.cols() != facto.cols()) {
    fail(ErrorCode::kShapeMismatch,
         fmt::format("tt_svd: matrix {} does not match factorization {}x{}",
                     w.shape().to_string(), facto.rows(), facto.cols()));
  }
  const std::size_t d = facto.order();
  if (policy.mode == TruncationMode::kMaxRanks) check_ranks_match(facto, *policy.max_ranks);

  std::vector<double> tensor(w.size());
  for_each_entry(facto, [&](std::size_t row, std::size_t col, std::size_t lin) {
    tensor[lin] = w.at(row, col);
  });

  const double sweep_tolerance =
      d > 1 ? policy.eps * frobenius_norm(w) / std::sqrt(static_cast<double>(d - 1)) : 0.0;

  std::vector<std::size_t> ranks(d + 1, 1);
  std::vector<Tensor> cores;
  cores.reserve(d);
  std::vector<double> carry = std::move(tensor);
  std::size_t rest = carry.size();

  auto emit_core = [&](std::size_t k, const std::vector<double>& flat, std::size_t rl,
                       std::size_t rr) {
    // flat is laid out [rl, p_k, rr] with p index l = i n_k + j.
    const std::size_t m = facto.out_modes()[k], n = facto.in_modes()[k];
    Tensor core(Shape{m, n, rl, rr});
    auto out = core.mutable_data();
    for (std::size_t a = 0; a < rl; ++a)
      for (std::size_t l = 0; l < m * n; ++l)
        for (std::size_t b = 0; b < rr; ++b) {
          const IndexPair ij = split_mode_index(l, n);
          out[((ij.out * n + ij.in) * rl + a) * rr + b] = flat[(a * m * n + l) * rr + b];
        }
    cores.push_back(std::move(core));
  };

  for (std::size_t k = 0; k + 1 < d; ++k) {
    const std::size_t pk = facto.mode_size(k);
    const std::size_t rows = ranks[k] * pk;
    rest /= pk;
    const Tensor unfolding = Tensor::matrix(rows, rest, carry);
    const ThinSvd svd = thin_svd(unfolding);
    const std::size_t r = choose_rank(svd.s, k, policy, sweep_tolerance);
    ranks[k + 1] = r;

    std::vector<double> left(rows * r);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t c = 0; c < r; ++c) left[i * r + c] = svd.u.at(i, c);
    emit_core(k, left, ranks[k], r);

    carry.assign(r * rest, 0.0);
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t j = 0; j < rest; ++j) carry[c * rest + j] = svd.s[c] * svd.v.at(j, c);
  }
  emit_core(d - 1, carry, ranks[d - 1], 1);
  return TTMatrix(facto, RankVector(std::move(ranks)), std::move(cores));
}

}  // namespace

TTMatrix tt_svd(const Tensor& w, const ModeFactorization& facto) {
  return tt_svd_impl(w, facto, TruncationPolicy{});
}

TTMatrix tt_svd(const Tensor& w, const ModeFactorization& facto, const RankVector& max_ranks) {
  return tt_svd_impl(w, facto, TruncationPolicy{TruncationMode::kMaxRanks, &max_ranks, 0.0});
}

TTMatrix tt_svd(const Tensor& w, const ModeFactorization& facto, double eps) {
  if (!(eps >= 0.0)) fail(ErrorCode::kInvalidArgument, "tt_svd eps must be >= 0");
  return tt_svd_impl(w, facto, TruncationPolicy{TruncationMode::kTolerance, nullptr, eps});
}

Tensor reconstruct(const TTMatrix& tt) {
  const auto& facto = tt.factorization();
  const auto& ranks = tt.ranks();
  // chain[L, r] over the leading modes, extended one core at a time.
  std::vector<double> chain{1.0};
  std::size_t lead = 1;
  for (std::size_t k = 0; k < tt.order(); ++k) {
    const std::size_t m = facto.out_modes()[k], n = facto.in_modes()[k];
    const std::size_t rl = ranks[k], rr = ranks[k + 1], pk = m * n;
    const auto g = tt.core(k).data();
    std::vector<double> next(lead * pk * rr, 0.0);
    for (std::size_t L = 0; L < lead; ++L)
      for (std::size_t l = 0; l < pk; ++l)
        for (std::size_t a = 0; a < rl; ++a) {
          const double c = chain[L * rl + a];
          if (c == 0.0) continue;
          const double* grow = &g[(l * rl + a) * rr];
          double* out = &next[(L * pk + l) * rr];
          for (std::size_t b = 0; b < rr; ++b) out[b] += c * grow[b];
        }
    chain = std::move(next);
    lead *= pk;
  }
  Tensor w(Shape{facto.rows(), facto.cols()});
  for_each_entry(facto, [&](std::size_t row, std::size_t col, std::size_t lin) {
    w.at(row, col) = chain[lin];
  });
  return w;
}

// ---------------------------------------------------------------------------
// TTL kernels

namespace kernel {

namespace {

struct StepDims {
  std::size_t lead;   // n_1..n_{k-1}
  std::size_t m, n;
  std::size_t rl, rr;
  std::size_t trail;  // m_{k+1}..m_d
};

std::vector<StepDims> step_dims(const ModeFactorization& facto, const RankVector& ranks) {
  const std::size_t d = facto.order();
  std::vector<StepDims> dims(d);
  std::size_t trail = 1;
  for (std::size_t k = d; k-- > 0;) {
    std::size_t lead = 1;
    for (std::size_t l = 0; l < k; ++l) lead *= facto.in_modes()[l];
    dims[k] = {lead, facto.out_modes()[k], facto.in_modes()[k], ranks[k], ranks[k + 1], trail};
    trail *= facto.out_modes()[k];
  }
  return dims;
}

// z_in laid out [lead, n, rr, trail]; returns z_out laid out [lead, rl, m, trail].
std::vector<double> contract(const StepDims& s, const double* g, const double* z,
                             std::uint64_t* macs) {
  std::vector<double> out(s.lead * s.rl * s.m * s.trail, 0.0);
  for (std::size_t p = 0; p < s.lead; ++p)
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t a = 0; a < s.rl; ++a) {
        double* orow = &out[((p * s.rl + a) * s.m + i) * s.trail];
        for (std::size_t j = 0; j < s.n; ++j)
          for (std::size_t b = 0; b < s.rr; ++b) {
            const double gv = g[((i * s.n + j) * s.rl + a) * s.rr + b];
            const double* zrow = &z[((p * s.n + j) * s.rr + b) * s.trail];
            for (std::size_t q = 0; q < s.trail; ++q) orow[q] += gv * zrow[q];
            if (macs) *macs += s.trail;
          }
      }
  return out;
}

void check_input(const ModeFactorization& facto, const RankVector& ranks,
                 std::span<const Tensor* const> cores, std::size_t x_len) {
  if (cores.size() != facto.order() || ranks.size() != facto.order() + 1) {
    fail(ErrorCode::kShapeMismatch, "TTL core/rank count does not match factorization");
  }
  if (x_len != facto.cols()) {
    fail(ErrorCode::kShapeMismatch,
         fmt::format("TTL input length {} but the layer expects {}", x_len, facto.cols()));
  }
}

}  // namespace

Tensor forward(const ModeFactorization& facto, const RankVector& ranks,
               std::span<const Tensor* const> cores, std::span<const double> x,
               std::uint64_t* macs) {
  check_input(facto, ranks, cores, x.size());
  const auto dims = step_dims(facto, ranks);
  std::vector<double> z(x.begin(), x.end());
  for (std::size_t k = facto.order(); k-- > 0;) {
    z = contract(dims[k], cores[k]->data().data(), z.data(), macs);
  }
  return Tensor(Shape{facto.rows()}, std::move(z));
}

void backward(const ModeFactorization& facto, const RankVector& ranks,
              std::span<const Tensor* const> cores, std::span<const double> x,
              std::span<const double> dy, std::span<Tensor* const> core_grads,
              std::span<double> dx) {
  check_input(facto, ranks, cores, x.size());
  if (dy.size() != facto.rows()) {
    fail(ErrorCode::kShapeMismatch,
         fmt::format("TTL output gradient length {} but the layer has {} rows", dy.size(),
                     facto.rows()));
  }
  const std::size_t d = facto.order();
  const auto dims = step_dims(facto, ranks);
  // inputs[k] is the tensor fed into core k during the forward sweep.
  std::vector<std::vector<double>> inputs(d);
  inputs[d - 1].assign(x.begin(), x.end());
  for (std::size_t k = d - 1; k > 0; --k) {
    inputs[k - 1] = contract(dims[k], cores[k]->data().data(), inputs[k].data(), nullptr);
  }

  std::vector<double> upstream(dy.begin(), dy.end());
  for (std::size_t k = 0; k < d; ++k) {
    const StepDims& s = dims[k];
    const double* g = cores[k]->data().data();
    const double* z = inputs[k].data();
    double* dg = core_grads.empty() || core_grads[k] == nullptr
                     ? nullptr
                     : core_grads[k]->mutable_data().data();
    std::vector<double> downstream(s.lead * s.n * s.rr * s.trail, 0.0);
    for (std::size_t p = 0; p < s.lead; ++p)
      for (std::size_t i = 0; i < s.m; ++i)
        for (std::size_t a = 0; a < s.rl; ++a) {
          const double* urow = &upstream[((p * s.rl + a) * s.m + i) * s.trail];
          for (std::size_t j = 0; j < s.n; ++j)
            for (std::size_t b = 0; b < s.rr; ++b) {
              const std::size_t gi = ((i * s.n + j) * s.rl + a) * s.rr + b;
              const std::size_t zoff = ((p * s.n + j) * s.rr + b) * s.trail;
              const double gv = g[gi];
              double acc = 0.0;
              for (std::size_t q = 0; q < s.trail; ++q) {
                acc += urow[q] * z[zoff + q];
                downstream[zoff + q] += gv * urow[q];
              }
              if (dg) dg[gi] += acc;
            }
        }
    upstream = std::move(downstream);
  }
  if (!dx.empty()) {
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += upstream[i];
  }
}

}  // namespace kernel

Tensor ttl_forward(const TTMatrix& tt, const Tensor& x) {
  if (x.rank() != 1) fail(ErrorCode::kShapeMismatch, "ttl_forward needs a vector input");
  const auto cores = tt.core_pointers();
  return kernel::forward(tt.factorization(), tt.ranks(), cores, x.data());
}

TTGradients ttl_backward(const TTMatrix& tt, const Tensor& x, const Tensor& dy) {
  if (x.rank() != 1 || dy.rank() != 1) fail(ErrorCode::kShapeMismatch, "ttl_backward needs vectors");
  TTGradients grads;
  grads.cores.reserve(tt.order());
  for (const Tensor& c : tt.cores()) grads.cores.emplace_back(c.shape());
  grads.dx = Tensor(Shape{tt.cols()});
  std::vector<Tensor*> grad_ptrs;
  for (Tensor& g : grads.cores) grad_ptrs.push_back(&g);
  const auto cores = tt.core_pointers();
  kernel::backward(tt.factorization(), tt.ranks(), cores, x.data(), dy.data(), grad_ptrs,
                   grads.dx.mutable_data());
  return grads;
}

std::size_t param_count(const ModeFactorization& facto, const RankVector& ranks) {
  check_ranks_match(facto, ranks);
  std::size_t total = 0;
  for (std::size_t k = 0; k < facto.order(); ++k)
    total += facto.out_modes()[k] * facto.in_modes()[k] * ranks[k] * ranks[k + 1];
  return total;
}

std::size_t param_count(const TTMatrix& tt) { return param_count(tt.factorization(), tt.ranks()); }

double compression_ratio(const TTMatrix& tt) {
  return static_cast<double>(tt.rows() * tt.cols()) / static_cast<double>(param_count(tt));
}

std::uint64_t ttl_macs(const ModeFactorization& facto, const RankVector& ranks) {
  check_ranks_match(facto, ranks);
  std::uint64_t total = 0;
  std::uint64_t trail = 1;
  for (std::size_t k = facto.order(); k-- > 0;) {
    std::uint64_t lead = 1;
    for (std::size_t l = 0; l < k; ++l) lead *= facto.in_modes()[l];
    total += lead * ranks[k] * facto.out_modes()[k] * trail * facto.in_modes()[k] * ranks[k + 1];
    trail *= facto.out_modes()[k];
  }
  return total;
}

double glorot_core_stddev(const ModeFactorization& facto, const RankVector& ranks) {
  check_ranks_match(facto, ranks);
  double interior = 1.0;
  for (std::size_t k = 1; k < facto.order(); ++k) interior *= static_cast<double>(ranks[k]);
  const double target = 2.0 / static_cast<double>(facto.rows() + facto.cols());
  return std::pow(target / interior, 1.0 / (2.0 * static_cast<double>(facto.order())));
}

TTMatrix random_tt(const ModeFactorization& facto, const RankVector& ranks, std::uint64_t seed) {
  const double stddev = glorot_core_stddev(facto, ranks);
  const SplitMix64 root(seed);
  std::vector<Tensor> cores;
  for (std::size_t k = 0; k < facto.order(); ++k) {
    cores.push_back(random_init(core_shape(facto, ranks, k), stddev, root.split(k).next_u64()));
  }
  return TTMatrix(facto, ranks, std::move(cores));
}

}  // namespace ttrnn::tt
