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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ttrnn/tensor.hpp"
#include "ttrnn/tt.hpp"

namespace ttrnn::container {

/// Layout, all integers little-endian:
///   magic "TTRNN\x00\x01\n" (8 bytes)
///   u64 manifest length, manifest (UTF-8 JSON)
///   u64 value count, values (f64)
///   u32 CRC-32 of everything above
inline constexpr std::string_view kMagic{"TTRNN\x00\x01\n", 8};
inline constexpr std::int64_t kFormatVersion = 1;

struct Container {
  nlohmann::ordered_json manifest;
  std::vector<double> values;
};

/// The manifest must carry "format_version".
std::string serialize(const nlohmann::ordered_json& manifest, std::span<const double> values);
/// ChecksumMismatch on truncation or corruption, FormatVersionMismatch for
/// files newer than kFormatVersion, ParseError for non-container input.
Container parse(std::string_view bytes);

void write(const std::filesystem::path& path, const nlohmann::ordered_json& manifest,
           std::span<const double> values);
Container read(const std::filesystem::path& path);

/// Standalone TT matrix file (kind "tt-matrix").
std::string serialize_tt(const tt::TTMatrix& matrix);
tt::TTMatrix parse_tt(std::string_view bytes);

/// Dense matrix input: binary ("TTMX" + u64 rows + u64 cols + f64 values,
/// row-major, little-endian) or CSV with one row per line.
Tensor parse_matrix(std::string_view bytes);
std::string serialize_matrix_binary(const Tensor& matrix);

}  // namespace ttrnn::container
