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

namespace ttrnn {

/// SplitMix64 used as a counter-based generator: draw i of a stream with key k
/// is mix64(k + (i + 1) * 0x9E3779B97F4A7C15). Streams are split by hashing a
/// stream id into a fresh key, so every consumer gets an independent,
/// platform-independent sequence.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  static std::uint64_t mix64(std::uint64_t z) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;

  /// Independent child generator for the given stream id.
  SplitMix64 split(std::uint64_t stream) const noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  struct FromKey {};
  SplitMix64(FromKey, std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace ttrnn
