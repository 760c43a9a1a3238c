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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ttrnn/text.hpp"

namespace ttrnn::io {

enum class DataFormat { kCsv, kJsonl };

DataFormat parse_format(std::string_view name);
/// ".jsonl" and ".json" are JSONL, everything else CSV.
DataFormat format_from_extension(const std::filesystem::path& path);

/// Whole-file helpers; failures are IoError messages naming the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

struct CsvRecord {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// RFC 4180: quoted fields may hold commas, doubled quotes and line breaks.
/// CRLF and LF are equivalent; blank lines are skipped.
std::vector<CsvRecord> parse_csv(std::string_view content);

/// Records with fields id, text, label. Unknown labels and malformed rows
/// raise ParseError with a line number; repeated ids raise DuplicateId.
std::vector<text::RawExample> parse_csv_dataset(std::string_view content);
std::vector<text::RawExample> parse_jsonl_dataset(std::string_view content);
std::vector<text::RawExample> load_dataset(const std::filesystem::path& path, DataFormat format);

/// `id,sentiment` with sentiment in {Positive, Negative, Neutral}.
std::unordered_map<std::string, text::ExternalSentiment> parse_predictions(std::string_view content);
std::unordered_map<std::string, text::ExternalSentiment> load_predictions(
    const std::filesystem::path& path);

/// One object per line: id, clean_text, hashtags, emotion_label, sentiment_label.
std::string cleaned_to_jsonl(const std::vector<text::CleanExample>& examples);
std::vector<text::CleanExample> parse_cleaned_jsonl(std::string_view content);
/// True when the first record carries a clean_text field.
bool looks_like_cleaned_jsonl(std::string_view content);

/// Accepts cleaned JSONL as written by cleaned_to_jsonl, or a raw dataset
/// (format taken from `format` or the extension) which is cleaned here.
std::vector<text::CleanExample> load_clean_examples(const std::filesystem::path& path,
                                                    std::optional<DataFormat> format = {});

}  // namespace ttrnn::io
