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

#include "ttrnn/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "ttrnn/error.hpp"

namespace ttrnn::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::string_view strip_bom(std::string_view s) {
  if (s.starts_with("\xEF\xBB\xBF")) s.remove_prefix(3);
  return s;
}

std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}


// Positions of `names` in a header record.
std::vector<std::size_t> locate_columns(const CsvRecord& header,
                                        std::initializer_list<std::string_view> names) {
  std::vector<std::size_t> out;
  for (std::string_view name : names) {
    std::size_t found = header.fields.size();
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
      if (lower(trim(header.fields[i])) == name) {
        found = i;
        break;
      }
    }
    if (found == header.fields.size()) {
      fail(ErrorCode::kParseError, fmt::format("line {}: header has no '{}' column", header.line, name));
    }
    out.push_back(found);
  }
  return out;
}

text::Emotion emotion_at_line(std::string_view label, std::size_t line) {
  try {
    return text::parse_emotion(trim(label));
  } catch (const Error&) {
    fail(ErrorCode::kParseError, fmt::format("line {}: unknown emotion label '{}'", line, label));
  }
}

void check_unique(std::unordered_set<std::string>& seen, const std::string& id, std::size_t line) {
  if (!seen.insert(id).second) {
    fail(ErrorCode::kDuplicateId, fmt::format("line {}: id '{}' appears more than once", line, id));
  }
}

json parse_json_line(std::string_view line, std::size_t number) {
  try {
    json value = json::parse(line);
    if (!value.is_object()) fail(ErrorCode::kParseError, fmt::format("line {}: expected a JSON object", number));
    return value;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, fmt::format("line {}: invalid JSON ({})", number, e.what()));
  }
}

std::string string_field(const json& object, const char* key, std::size_t line) {
  const auto it = object.find(key);
  if (it == object.end()) fail(ErrorCode::kParseError, fmt::format("line {}: missing field '{}'", line, key));
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer() || it->is_number_unsigned()) return it->dump();
  fail(ErrorCode::kParseError, fmt::format("line {}: field '{}' must be a string", line, key));
}

// Calls fn(line_number, line) for every non-blank line.
template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  content = strip_bom(content);
  std::size_t number = 0;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++number;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (trim(line).empty()) continue;
    fn(number, line);
  }
}

}  // namespace

DataFormat parse_format(std::string_view name) {
  const std::string n = lower(std::string(name));
  if (n == "csv") return DataFormat::kCsv;
  if (n == "jsonl") return DataFormat::kJsonl;
  fail(ErrorCode::kConfigError, fmt::format("unknown format '{}' (expected csv or jsonl)", name));
}

DataFormat format_from_extension(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  return ext == ".jsonl" || ext == ".json" ? DataFormat::kJsonl : DataFormat::kCsv;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, fmt::format("cannot open '{}' for reading", path.string()));
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIoError, fmt::format("error while reading '{}'", path.string()));
  return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, fmt::format("cannot open '{}' for writing", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) fail(ErrorCode::kIoError, fmt::format("error while writing '{}'", path.string()));
}

std::vector<CsvRecord> parse_csv(std::string_view content) {
  content = strip_bom(content);
  std::vector<CsvRecord> records;
  CsvRecord record;
  std::string field;
  std::size_t line = 1;
  record.line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;

  auto end_field = [&] {
    record.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = !record_has_content && record.fields.size() == 1 && record.fields[0].empty();
    if (!blank) records.push_back(std::move(record));
    record = CsvRecord{};
    record_has_content = false;
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') {
        field.push_back('\n');
        ++i;
        ++line;
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          fail(ErrorCode::kParseError, fmt::format("line {}: stray quote inside an unquoted field", line));
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        record.line = line;
        break;
      default:
        if (field_was_quoted) {
          fail(ErrorCode::kParseError, fmt::format("line {}: text after a closing quote", line));
        }
        field.push_back(c);
        record_has_content = true;
    }
  }
  if (in_quotes) fail(ErrorCode::kParseError, fmt::format("line {}: unterminated quoted field", record.line));
  if (record_has_content || !field.empty()) end_record();
  return records;
}

std::vector<text::RawExample> parse_csv_dataset(std::string_view content) {
  const std::vector<CsvRecord> records = parse_csv(content);
  if (records.empty()) fail(ErrorCode::kParseError, "line 1: missing header 'id,text,label'");
  const auto cols = locate_columns(records.front(), {"id", "text", "label"});
  const std::size_t needed = *std::max_element(cols.begin(), cols.end()) + 1;
  std::vector<text::RawExample> out;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() < needed) {
      fail(ErrorCode::kParseError, fmt::format("line {}: expected at least {} fields, found {}",
                                               rec.line, needed, rec.fields.size()));
    }
    text::RawExample ex{trim(rec.fields[cols[0]]), rec.fields[cols[1]],
                        emotion_at_line(rec.fields[cols[2]], rec.line)};
    if (ex.id.empty()) fail(ErrorCode::kParseError, fmt::format("line {}: empty id", rec.line));
    check_unique(seen, ex.id, rec.line);
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<text::RawExample> parse_jsonl_dataset(std::string_view content) {
  std::vector<text::RawExample> out;
  std::unordered_set<std::string> seen;
  for_each_line(content, [&](std::size_t number, std::string_view line) {
    const json object = parse_json_line(line, number);
    text::RawExample ex{string_field(object, "id", number), string_field(object, "text", number),
                        emotion_at_line(string_field(object, "label", number), number)};
    if (ex.id.empty()) fail(ErrorCode::kParseError, fmt::format("line {}: empty id", number));
    check_unique(seen, ex.id, number);
    out.push_back(std::move(ex));
  });
  return out;
}

std::vector<text::RawExample> load_dataset(const std::filesystem::path& path, DataFormat format) {
  const std::string content = read_file(path);
  return format == DataFormat::kCsv ? parse_csv_dataset(content) : parse_jsonl_dataset(content);
}

std::unordered_map<std::string, text::ExternalSentiment> parse_predictions(std::string_view content) {
  const std::vector<CsvRecord> records = parse_csv(content);
  std::unordered_map<std::string, text::ExternalSentiment> out;
  if (records.empty()) return out;
  const auto cols = locate_columns(records.front(), {"id", "sentiment"});
  const std::size_t needed = std::max(cols[0], cols[1]) + 1;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() < needed) {
      fail(ErrorCode::kParseError, fmt::format("line {}: expected at least {} fields, found {}",
                                               rec.line, needed, rec.fields.size()));
    }
    text::ExternalSentiment s;
    try {
      s = text::parse_external_sentiment(trim(rec.fields[cols[1]]));
    } catch (const Error&) {
      fail(ErrorCode::kParseError,
           fmt::format("line {}: unknown sentiment '{}'", rec.line, rec.fields[cols[1]]));
    }
    if (!out.emplace(trim(rec.fields[cols[0]]), s).second) {
      fail(ErrorCode::kDuplicateId,
           fmt::format("line {}: id '{}' appears more than once", rec.line, rec.fields[cols[0]]));
    }
  }
  return out;
}

std::unordered_map<std::string, text::ExternalSentiment> load_predictions(
    const std::filesystem::path& path) {
  return parse_predictions(read_file(path));
}

std::string cleaned_to_jsonl(const std::vector<text::CleanExample>& examples) {
  std::string out;
  for (const text::CleanExample& e : examples) {
    ordered_json object;
    object["id"] = e.id;
    object["clean_text"] = e.clean_text;
    object["hashtags"] = e.hashtags;
    object["emotion_label"] = text::emotion_name(e.emotion);
    object["sentiment_label"] = text::sentiment_name(e.sentiment);
    out += object.dump(-1, ' ', false, json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::vector<text::CleanExample> parse_cleaned_jsonl(std::string_view content) {
  std::vector<text::CleanExample> out;
  std::unordered_set<std::string> seen;
  for_each_line(content, [&](std::size_t number, std::string_view line) {
    const json object = parse_json_line(line, number);
    text::CleanExample ex;
    ex.id = string_field(object, "id", number);
    ex.clean_text = string_field(object, "clean_text", number);
    if (const auto it = object.find("hashtags"); it != object.end()) {
      if (!it->is_array()) fail(ErrorCode::kParseError, fmt::format("line {}: hashtags must be a list", number));
      for (const json& tag : *it) {
        if (!tag.is_string()) fail(ErrorCode::kParseError, fmt::format("line {}: hashtags must be strings", number));
        ex.hashtags.push_back(tag.get<std::string>());
      }
    }
    ex.emotion = emotion_at_line(string_field(object, "emotion_label", number), number);
    ex.sentiment = text::map_emotion_to_sentiment(ex.emotion);
    check_unique(seen, ex.id, number);
    out.push_back(std::move(ex));
  });
  return out;
}

bool looks_like_cleaned_jsonl(std::string_view content) {
  bool cleaned = false;
  bool decided = false;
  for_each_line(content, [&](std::size_t, std::string_view line) {
    if (decided) return;
    decided = true;
    const json object = json::parse(line, nullptr, false);
    cleaned = object.is_object() && object.contains("clean_text");
  });
  return cleaned;
}

std::vector<text::CleanExample> load_clean_examples(const std::filesystem::path& path,
                                                    std::optional<DataFormat> format) {
  const std::string content = read_file(path);
  const DataFormat chosen = format.value_or(format_from_extension(path));
  if (chosen == DataFormat::kJsonl && looks_like_cleaned_jsonl(content)) return parse_cleaned_jsonl(content);
  const auto raw = chosen == DataFormat::kCsv ? parse_csv_dataset(content) : parse_jsonl_dataset(content);
  std::vector<text::CleanExample> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(text::clean_example(r));
  return out;
}

}  // namespace ttrnn::io
