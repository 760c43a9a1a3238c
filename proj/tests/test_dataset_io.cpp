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

#include <filesystem>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "ttrnn/dataset_io.hpp"
#include "ttrnn/synthetic.hpp"

namespace ttrnn::io {
namespace {

namespace fs = std::filesystem;
using text::Emotion;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("ttrnn_io_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

TEST(Csv, QuotingRules) {
  const auto records = parse_csv("a,\"b,c\",\"he said \"\"hi\"\"\"\n\n\"multi\nline\",x,\n");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].fields, (std::vector<std::string>{"a", "b,c", "he said \"hi\""}));
  EXPECT_EQ(records[0].line, 1u);
  EXPECT_EQ(records[1].fields, (std::vector<std::string>{"multi\nline", "x", ""}));
  EXPECT_EQ(records[1].line, 3u);
  EXPECT_ERROR_CODE(parse_csv("a,\"unterminated\n"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(parse_csv("a,\"x\"y\n"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(parse_csv("a,b\"c\n"), ErrorCode::kParseError);
}

TEST(Csv, CrlfAndLfParseIdentically) {
  const std::string lf = "id,text,label\n1,\"hi\nthere\",Happy\n2,sad day,Sad\n3,x,angry\n";
  std::string crlf;
  for (char ch : lf) {
    if (ch == '\n') crlf += '\r';
    crlf += ch;
  }
  const auto a = parse_csv_dataset(lf);
  const auto b = parse_csv_dataset(crlf);
  ASSERT_EQ(a.size(), 3u);
  ASSERT_EQ(b.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].emotion, b[i].emotion);
  }
  EXPECT_EQ(a[0].text, "hi\nthere");
  EXPECT_EQ(b[0].text, "hi\nthere");
  EXPECT_EQ(a[2].emotion, Emotion::kAngry);
  EXPECT_EQ(parse_csv_dataset("\xEF\xBB\xBF" + lf).size(), 3u);
}

TEST(Csv, DatasetErrors) {
  try {
    parse_csv_dataset("id,text,label\n1,a,Happy\n2,b,Bored\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("Bored"), std::string::npos);
  }
  EXPECT_ERROR_CODE(parse_csv_dataset("id,text,label\n1,a,Happy\n1,b,Sad\n"), ErrorCode::kDuplicateId);
  EXPECT_ERROR_CODE(parse_csv_dataset("id,body,label\n1,a,Happy\n"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(parse_csv_dataset("id,text,label\n1,a\n"), ErrorCode::kParseError);
  // Column order follows the header.
  const auto reordered = parse_csv_dataset("label,id,text\nSad,7,rain\n");
  EXPECT_EQ(reordered[0].id, "7");
  EXPECT_EQ(reordered[0].text, "rain");
}

TEST(Jsonl, ParsesAndReportsLines) {
  const auto rows = parse_jsonl_dataset(
      "{\"id\":\"a\",\"text\":\"x\",\"label\":\"Fearful\"}\n\n{\"id\":\"b\",\"text\":\"y\",\"label\":\"bad\"}\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].emotion, Emotion::kBad);
  try {
    parse_jsonl_dataset("{\"id\":\"a\",\"text\":\"x\",\"label\":\"Happy\"}\nnot json\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_ERROR_CODE(parse_jsonl_dataset("{\"id\":\"a\",\"label\":\"Happy\"}\n"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(parse_jsonl_dataset("{\"id\":\"a\",\"text\":\"x\",\"label\":\"Happy\"}\n"
                                        "{\"id\":\"a\",\"text\":\"y\",\"label\":\"Sad\"}\n"),
                    ErrorCode::kDuplicateId);
}

TEST(Formats, NamesAndExtensions) {
  EXPECT_EQ(parse_format("csv"), DataFormat::kCsv);
  EXPECT_EQ(parse_format("jsonl"), DataFormat::kJsonl);
  EXPECT_ERROR_CODE(parse_format("xml"), ErrorCode::kConfigError);
  EXPECT_EQ(format_from_extension("x/data.jsonl"), DataFormat::kJsonl);
  EXPECT_EQ(format_from_extension("data.JSON"), DataFormat::kJsonl);
  EXPECT_EQ(format_from_extension("data.tsv"), DataFormat::kCsv);
}

TEST(Predictions, Parse) {
  const auto p = parse_predictions("id,sentiment\na,Positive\nb,neutral\n");
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.at("b"), text::ExternalSentiment::kNeutral);
  EXPECT_TRUE(parse_predictions("").empty());
  EXPECT_ERROR_CODE(parse_predictions("id,sentiment\na,Meh\n"), ErrorCode::kParseError);
}

TEST(CleanedJsonl, RoundTripAndFieldOrder) {
  const std::vector<text::CleanExample> examples = {
      text::clean_example({"1", "I'm so #Happy \U0001F602", Emotion::kHappy}),
      text::clean_example({"2", "RT @x \"quoted\" \\ back", Emotion::kSad})};
  const std::string jsonl = cleaned_to_jsonl(examples);
  EXPECT_EQ(jsonl.substr(0, jsonl.find('\n')),
            "{\"id\":\"1\",\"clean_text\":\"i am so happy :face_with_tears_of_joy:\","
            "\"hashtags\":[\"happy\"],\"emotion_label\":\"Happy\",\"sentiment_label\":\"Positive\"}");
  EXPECT_TRUE(looks_like_cleaned_jsonl(jsonl));
  EXPECT_FALSE(looks_like_cleaned_jsonl("{\"id\":\"a\",\"text\":\"x\",\"label\":\"Happy\"}\n"));
  const auto back = parse_cleaned_jsonl(jsonl);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].id, examples[i].id);
    EXPECT_EQ(back[i].clean_text, examples[i].clean_text);
    EXPECT_EQ(back[i].hashtags, examples[i].hashtags);
    EXPECT_EQ(back[i].emotion, examples[i].emotion);
    EXPECT_EQ(back[i].sentiment, examples[i].sentiment);
  }
  EXPECT_EQ(cleaned_to_jsonl(back), jsonl);
}

TEST(Files, LoadAndErrors) {
  TempDir dir;
  write_file(dir / "d.csv", "id,text,label\n1,Hello @you,Happy\n");
  const auto raw = load_dataset(dir / "d.csv", DataFormat::kCsv);
  ASSERT_EQ(raw.size(), 1u);
  EXPECT_EQ(load_clean_examples(dir / "d.csv")[0].clean_text, "hello");
  write_file(dir / "c.jsonl", cleaned_to_jsonl(load_clean_examples(dir / "d.csv")));
  EXPECT_EQ(load_clean_examples(dir / "c.jsonl")[0].clean_text, "hello");
  EXPECT_ERROR_CODE(load_dataset(dir / "d.csv", DataFormat::kJsonl), ErrorCode::kParseError);
  try {
    read_file(dir / "missing.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
    EXPECT_NE(std::string(e.what()).find("missing.csv"), std::string::npos);
  }
}

TEST(Synthetic, BundledFileMatchesGenerator) {
  const std::string expected =
      synthetic::to_csv(synthetic::generate(synthetic::kBundledSize, synthetic::kBundledSeed));
  EXPECT_EQ(read_file(fs::path(TTRNN_SOURCE_DIR) / "data" / "synthetic_6class.csv"), expected);
  const auto parsed = parse_csv_dataset(expected);
  ASSERT_EQ(parsed.size(), synthetic::kBundledSize);
  std::size_t per_class[6] = {};
  for (const auto& ex : parsed) ++per_class[static_cast<std::size_t>(ex.emotion)];
  for (std::size_t c : per_class) EXPECT_EQ(c, synthetic::kBundledSize / 6);
}

}  // namespace
}  // namespace ttrnn::io
