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

#include "ttrnn/metrics.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "ttrnn/error.hpp"

namespace ttrnn {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionCounts ConfusionCounts::tally(std::span<const std::size_t> labels,
                                       std::span<const std::size_t> predictions,
                                       std::size_t num_classes) {
  require(labels.size() == predictions.size(), ErrorCode::kShapeMismatch,
          fmt::format("{} labels but {} predictions", labels.size(), predictions.size()));
  require(num_classes > 0, ErrorCode::kInvalidArgument, "num_classes must be positive");
  ConfusionCounts counts;
  counts.per_class.resize(num_classes);
  counts.total = labels.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t y = labels[i];
    const std::size_t p = predictions[i];
    if (y >= num_classes || p >= num_classes) {
      fail(ErrorCode::kLabelOutOfRange,
           fmt::format("class id {} outside [0, {})", std::max(y, p), num_classes));
    }
    if (y == p) {
      ++counts.per_class[y].tp;
    } else {
      ++counts.per_class[p].fp;
      ++counts.per_class[y].fn;
    }
  }
  for (ClassCounts& c : counts.per_class) c.tn = counts.total - c.tp - c.fp - c.fn;
  return counts;
}

std::uint64_t ConfusionCounts::correct() const {
  std::uint64_t n = 0;
  for (const ClassCounts& c : per_class) n += c.tp;
  return n;
}

double precision(const ConfusionCounts& counts, std::size_t c) {
  const ClassCounts& k = counts.per_class.at(c);
  return ratio(k.tp, k.tp + k.fp);
}

double recall(const ConfusionCounts& counts, std::size_t c) {
  const ClassCounts& k = counts.per_class.at(c);
  return ratio(k.tp, k.tp + k.fn);
}

double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

double f1_from_counts(const ClassCounts& counts) {
  return ratio(2 * counts.tp, 2 * counts.tp + counts.fp + counts.fn);
}

MetricsReport compute_metrics(std::span<const std::size_t> labels,
                              std::span<const std::size_t> predictions, std::size_t num_classes,
                              double loss) {
  if (labels.empty()) fail(ErrorCode::kEmptyTestSet, "no examples to evaluate");
  const ConfusionCounts counts = ConfusionCounts::tally(labels, predictions, num_classes);
  MetricsReport report;
  report.count = counts.total;
  report.loss = loss;
  ClassCounts pooled;
  double f1_sum = 0.0;
  std::size_t active = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const ClassCounts& k = counts.per_class[c];
    ClassMetrics m;
    m.precision = precision(counts, c);
    m.recall = recall(counts, c);
    m.f1 = f1_from_counts(k);
    m.support = k.tp + k.fn;
    // Classes absent from both labels and predictions do not enter the macro mean.
    if (k.tp + k.fp + k.fn > 0) {
      f1_sum += m.f1;
      ++active;
    }
    report.per_class.push_back(m);
    pooled.tp += k.tp;
    pooled.fp += k.fp;
    pooled.fn += k.fn;
  }
  report.macro_f1 = f1_sum / static_cast<double>(active);
  report.micro_f1 = f1_from_counts(pooled);
  report.accuracy = ratio(counts.correct(), counts.total);
  return report;
}

}  // namespace ttrnn
