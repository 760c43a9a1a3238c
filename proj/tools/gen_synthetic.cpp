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

// Writes the bundled synthetic dataset: gen_synthetic OUT [COUNT] [SEED]

#include <cstdio>
#include <string>

#include <fmt/format.h>

#include "ttrnn/dataset_io.hpp"
#include "ttrnn/error.hpp"
#include "ttrnn/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc < 2 || argc > 4) {
    fmt::print(stderr, "usage: gen_synthetic OUT [COUNT] [SEED]\n");
    return 2;
  }
  try {
    const std::size_t count = argc > 2 ? std::stoul(argv[2]) : ttrnn::synthetic::kBundledSize;
    const std::uint64_t seed = argc > 3 ? std::stoull(argv[3]) : ttrnn::synthetic::kBundledSeed;
    ttrnn::io::write_file(argv[1], ttrnn::synthetic::to_csv(ttrnn::synthetic::generate(count, seed)));
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
