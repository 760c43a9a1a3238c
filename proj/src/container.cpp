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

#include "ttrnn/container.hpp"

#include <bit>
#include <charconv>
#include <cstring>

#include <fmt/format.h>
#include <zlib.h>

#include "ttrnn/dataset_io.hpp"
#include "ttrnn/error.hpp"

namespace ttrnn::container {

namespace {

using nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little,
              "container encoding assumes a little-endian host");

template <typename T>
void put(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
T get(std::string_view bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

std::uint32_t crc_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - offset, 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + offset), static_cast<uInt>(chunk));
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::size_t> size_list(const ordered_json& j, const char* key) {
  try {
    return j.at(key).get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, fmt::format("manifest field '{}': {}", key, e.what()));
  }
}

}  // namespace

std::string serialize(const ordered_json& manifest, std::span<const double> values) {
  require(manifest.contains("format_version"), ErrorCode::kInvalidArgument,
          "manifest lacks format_version");
  const std::string text = manifest.dump();
  std::string out(kMagic);
  put<std::uint64_t>(out, text.size());
  out += text;
  put<std::uint64_t>(out, values.size());
  for (double v : values) put<double>(out, v);
  put<std::uint32_t>(out, crc_of(out));
  return out;
}

Container parse(std::string_view bytes) {
  // A prefix of the magic is a truncated container, anything else is foreign.
  if (!bytes.starts_with(kMagic.substr(0, std::min(bytes.size(), kMagic.size())))) {
    fail(ErrorCode::kParseError, "not a ttrnn container (bad magic)");
  }
  constexpr std::size_t kMinimum = 8 + 8 + 8 + 4;
  if (bytes.size() < kMinimum) {
    fail(ErrorCode::kChecksumMismatch, fmt::format("file truncated at {} bytes", bytes.size()));
  }
  const std::uint32_t stored = get<std::uint32_t>(bytes, bytes.size() - 4);
  const std::uint32_t actual = crc_of(bytes.substr(0, bytes.size() - 4));
  if (stored != actual) {
    fail(ErrorCode::kChecksumMismatch,
         fmt::format("CRC-32 {:08x} does not match stored {:08x}", actual, stored));
  }
  const std::uint64_t manifest_len = get<std::uint64_t>(bytes, 8);
  if (manifest_len > bytes.size() - kMinimum) fail(ErrorCode::kChecksumMismatch, "manifest length out of range");
  const std::size_t count_at = 16 + manifest_len;
  const std::uint64_t count = get<std::uint64_t>(bytes, count_at);
  if (count != (bytes.size() - count_at - 8 - 4) / 8 || (bytes.size() - count_at - 12) % 8 != 0) {
    fail(ErrorCode::kChecksumMismatch, "value count does not match the file size");
  }
  Container c;
  try {
    c.manifest = ordered_json::parse(bytes.substr(16, manifest_len));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, fmt::format("manifest is not valid JSON: {}", e.what()));
  }
  const auto version_it = c.manifest.find("format_version");
  if (version_it == c.manifest.end() || !version_it->is_number_integer()) {
    fail(ErrorCode::kParseError, "manifest lacks an integer format_version");
  }
  const auto version = version_it->get<std::int64_t>();
  if (version > kFormatVersion || version < 1) {
    fail(ErrorCode::kFormatVersionMismatch,
         fmt::format("file format version {}, this build reads version {}", version, kFormatVersion));
  }
  c.values.resize(count);
  if (count) std::memcpy(c.values.data(), bytes.data() + count_at + 8, count * sizeof(double));
  return c;
}

void write(const std::filesystem::path& path, const ordered_json& manifest,
           std::span<const double> values) {
  io::write_file(path, serialize(manifest, values));
}

Container read(const std::filesystem::path& path) { return parse(io::read_file(path)); }

std::string serialize_tt(const tt::TTMatrix& matrix) {
  ordered_json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["kind"] = "tt-matrix";
  manifest["rows"] = matrix.rows();
  manifest["cols"] = matrix.cols();
  manifest["out_modes"] = matrix.factorization().out_modes();
  manifest["in_modes"] = matrix.factorization().in_modes();
  manifest["ranks"] = matrix.ranks().values();
  std::vector<double> values;
  for (const Tensor& core : matrix.cores()) values.insert(values.end(), core.data().begin(), core.data().end());
  return serialize(manifest, values);
}

tt::TTMatrix parse_tt(std::string_view bytes) {
  const Container c = parse(bytes);
  if (c.manifest.value("kind", "") != "tt-matrix") fail(ErrorCode::kParseError, "file is not a TT matrix");
  const tt::ModeFactorization facto(size_list(c.manifest, "out_modes"), size_list(c.manifest, "in_modes"));
  const tt::RankVector ranks(size_list(c.manifest, "ranks"));
  std::vector<Tensor> cores;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < facto.order(); ++k) {
    const Shape shape = tt::core_shape(facto, ranks, k);
    require(offset + shape.numel() <= c.values.size(), ErrorCode::kParseError, "TT file has too few values");
    cores.emplace_back(shape, std::vector<double>(c.values.begin() + static_cast<std::ptrdiff_t>(offset),
                                                  c.values.begin() + static_cast<std::ptrdiff_t>(offset + shape.numel())));
    offset += shape.numel();
  }
  require(offset == c.values.size(), ErrorCode::kParseError, "TT file has trailing values");
  return tt::TTMatrix(facto, ranks, std::move(cores));
}

std::string serialize_matrix_binary(const Tensor& matrix) {
  std::string out("TTMX");
  put<std::uint64_t>(out, matrix.rows());
  put<std::uint64_t>(out, matrix.cols());
  for (double v : matrix.data()) put<double>(out, v);
  return out;
}

Tensor parse_matrix(std::string_view bytes) {
  if (bytes.starts_with("TTMX")) {
    require(bytes.size() >= 20, ErrorCode::kParseError, "binary matrix header truncated");
    const auto rows = get<std::uint64_t>(bytes, 4);
    const auto cols = get<std::uint64_t>(bytes, 12);
    require(rows > 0 && cols > 0, ErrorCode::kParseError, "binary matrix has a zero dimension");
    require(bytes.size() == 20 + rows * cols * 8, ErrorCode::kParseError,
            fmt::format("binary matrix {}x{} needs {} bytes, file has {}", rows, cols,
                        20 + rows * cols * 8, bytes.size()));
    std::vector<double> values(rows * cols);
    std::memcpy(values.data(), bytes.data() + 20, values.size() * sizeof(double));
    return Tensor(Shape{rows, cols}, std::move(values));
  }
  const auto records = io::parse_csv(bytes);
  require(!records.empty(), ErrorCode::kParseError, "matrix file is empty");
  const std::size_t cols = records.front().fields.size();
  std::vector<double> values;
  values.reserve(records.size() * cols);
  for (const auto& rec : records) {
    if (rec.fields.size() != cols) {
      fail(ErrorCode::kParseError,
           fmt::format("line {}: expected {} values, found {}", rec.line, cols, rec.fields.size()));
    }
    for (const std::string& field : rec.fields) {
      std::size_t begin = field.find_first_not_of(" \t");
      std::size_t end = field.find_last_not_of(" \t");
      if (begin == std::string::npos) fail(ErrorCode::kParseError, fmt::format("line {}: empty value", rec.line));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data() + begin, field.data() + end + 1, v);
      if (ec != std::errc{} || ptr != field.data() + end + 1) {
        fail(ErrorCode::kParseError, fmt::format("line {}: '{}' is not a number", rec.line, field));
      }
      values.push_back(v);
    }
  }
  return Tensor(Shape{records.size(), cols}, std::move(values));
}

}  // namespace ttrnn::container
