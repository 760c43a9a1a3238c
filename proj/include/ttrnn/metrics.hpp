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
#include <span>
#include <vector>

namespace ttrnn {

/// One-vs-rest counts for a single class.
struct ClassCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
};

struct ConfusionCounts {
  std::vector<ClassCounts> per_class;
  std::uint64_t total = 0;

  /// Throws LabelOutOfRange for ids >= num_classes, ShapeMismatch for
  /// differing lengths.
  static ConfusionCounts tally(std::span<const std::size_t> labels,
                               std::span<const std::size_t> predictions, std::size_t num_classes);

  std::size_t num_classes() const noexcept { return per_class.size(); }
  std::uint64_t correct() const;
};

/// TP / (TP + FP), 0 when the denominator is 0.
double precision(const ConfusionCounts& counts, std::size_t c);
/// TP / (TP + FN), 0 when the denominator is 0.
double recall(const ConfusionCounts& counts, std::size_t c);
/// Harmonic mean 2PR / (P + R), 0 when P + R = 0.
double f1(double p, double r);
/// Same value as f1(precision, recall) computed from integers in one
/// division: 2TP / (2TP + FP + FN).
double f1_from_counts(const ClassCounts& counts);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;  // TP + FN
};

struct MetricsReport {
  std::vector<ClassMetrics> per_class;
  /// Mean F1 over the classes that occur among labels or predictions.
  double macro_f1 = 0.0;
  /// From pooled counts; equals accuracy for single-label data.
  double micro_f1 = 0.0;
  double accuracy = 0.0;
  double loss = 0.0;
  std::uint64_t count = 0;
};

/// Throws EmptyTestSet when there is nothing to score.
MetricsReport compute_metrics(std::span<const std::size_t> labels,
                              std::span<const std::size_t> predictions, std::size_t num_classes,
                              double loss = 0.0);

}  // namespace ttrnn
