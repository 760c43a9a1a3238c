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
#include <string>
#include <vector>

#include "ttrnn/text.hpp"

namespace ttrnn::synthetic {

/// Seed and size of the bundled data/synthetic_6class.csv.
inline constexpr std::uint64_t kBundledSeed = 20240607;
inline constexpr std::size_t kBundledSize = 3000;

/// Tweet-like sentences over a shared filler vocabulary, each carrying one or
/// two keywords of its emotion class. Classes are balanced (label i % 6).
/// Retweet markers, mentions, hashtags, contractions and emoji appear at
/// random so the cleaning pipeline has work to do.
std::vector<text::RawExample> generate(std::size_t count, std::uint64_t seed);

/// Header `id,text,label`; text fields are always quoted.
std::string to_csv(const std::vector<text::RawExample>& examples);

}  // namespace ttrnn::synthetic
