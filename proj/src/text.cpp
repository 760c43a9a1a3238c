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

#include "ttrnn/text.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <zlib.h>

#include "ttrnn/error.hpp"
#include "ttrnn/utf8.hpp"

namespace ttrnn::embedded {
extern const std::string_view kEmojiTable;
extern const std::string_view kContractionTable;
}  // namespace ttrnn::embedded

namespace ttrnn::text {

namespace {

constexpr std::array<std::string_view, 6> kEmotionNames = {"Angry", "Bad",  "Fearful",
                                                           "Happy", "Sad",  "Surprised"};

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace

std::string_view emotion_name(Emotion emotion) { return kEmotionNames[static_cast<int>(emotion)]; }

Emotion parse_emotion(std::string_view name) {
  const std::string lowered = ascii_lower(name);
  for (Emotion e : kAllEmotions)
    if (ascii_lower(emotion_name(e)) == lowered) return e;
  fail(ErrorCode::kUnknownEmotion, fmt::format("'{}' is not one of {}", name,
                                               fmt::join(kEmotionNames, ", ")));
}

std::string_view sentiment_name(Sentiment sentiment) {
  return sentiment == Sentiment::kPositive ? "Positive" : "Negative";
}

std::string_view external_sentiment_name(ExternalSentiment sentiment) {
  switch (sentiment) {
    case ExternalSentiment::kPositive: return "Positive";
    case ExternalSentiment::kNegative: return "Negative";
    case ExternalSentiment::kNeutral: return "Neutral";
  }
  return "?";
}

ExternalSentiment parse_external_sentiment(std::string_view name) {
  const std::string lowered = ascii_lower(name);
  if (lowered == "positive") return ExternalSentiment::kPositive;
  if (lowered == "negative") return ExternalSentiment::kNegative;
  if (lowered == "neutral") return ExternalSentiment::kNeutral;
  fail(ErrorCode::kParseError, fmt::format("unknown sentiment '{}'", name));
}

Sentiment map_emotion_to_sentiment(Emotion emotion) {
  switch (emotion) {
    case Emotion::kHappy:
    case Emotion::kSurprised:
      return Sentiment::kPositive;
    case Emotion::kAngry:
    case Emotion::kBad:
    case Emotion::kFearful:
    case Emotion::kSad:
      return Sentiment::kNegative;
  }
  return Sentiment::kNegative;
}

Sentiment map_emotion_to_sentiment(std::string_view emotion) {
  return map_emotion_to_sentiment(parse_emotion(emotion));
}

// ---------------------------------------------------------------------------
// Bundled tables

namespace {

struct EmojiEntry {
  std::u32string sequence;
  std::string alias;
};

class EmojiTable {
 public:
  EmojiTable() {
    std::istringstream in{std::string(embedded::kEmojiTable)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      std::istringstream hex(line.substr(0, tab));
      EmojiEntry entry;
      std::string cp;
      while (hex >> cp) entry.sequence.push_back(static_cast<char32_t>(std::stoul(cp, nullptr, 16)));
      entry.alias = line.substr(tab + 1);
      if (entry.sequence.empty()) continue;
      by_first_[entry.sequence.front()].push_back(std::move(entry));
      ++size_;
    }
    for (auto& [first, entries] : by_first_) {
      std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.sequence.size() > b.sequence.size();
      });
    }
  }

  // Longest entry matching at text[pos], or nullptr.
  const EmojiEntry* match(std::u32string_view text, std::size_t pos) const {
    const auto it = by_first_.find(text[pos]);
    if (it == by_first_.end()) return nullptr;
    for (const EmojiEntry& e : it->second) {
      if (text.substr(pos, e.sequence.size()) == e.sequence) return &e;
    }
    return nullptr;
  }

  std::size_t size() const { return size_; }

 private:
  std::unordered_map<char32_t, std::vector<EmojiEntry>> by_first_;
  std::size_t size_ = 0;
};

const EmojiTable& emoji_table() {
  static const EmojiTable table;
  return table;
}

const std::unordered_map<std::string, std::string>& contraction_table() {
  static const auto table = [] {
    std::unordered_map<std::string, std::string> t;
    std::istringstream in{std::string(embedded::kContractionTable)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab != std::string::npos) t.emplace(line.substr(0, tab), line.substr(tab + 1));
    }
    return t;
  }();
  return table;
}

constexpr char32_t kRightQuote = U'’';

// Characters that continue a hashtag, mention or word.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9') ||
           cp == U'_';
  }
  if (utf8::is_space(cp)) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp == 0xFFFD) return false;
  return true;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == kRightQuote; }

std::u32string collapse_whitespace(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t cp : text) {
    if (utf8::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(cp);
  }
  return out;
}

bool starts_with_rt_token(std::u32string_view text) {
  if (text.size() < 2) return false;
  const bool r = text[0] == U'R' || text[0] == U'r';
  const bool t = text[1] == U'T' || text[1] == U't';
  return r && t && (text.size() == 2 || text[2] == U' ');
}

std::u32string strip_leading_retweet(std::u32string text) {
  while (starts_with_rt_token(text)) text.erase(0, std::min<std::size_t>(3, text.size()));
  return text;
}

std::u32string replace_emojis(std::u32string_view text) {
  const EmojiTable& table = emoji_table();
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (const EmojiEntry* e = table.match(text, i)) {
      out.push_back(U' ');
      out += utf8::decode(e->alias);
      out.push_back(U' ');
      i += e->sequence.size();
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::u32string extract_hashtags(std::u32string_view text, std::vector<std::string>& hashtags) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] != U'#') {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i + 1;
    while (end < text.size() && is_word_char(text[end])) ++end;
    if (end == i + 1) {
      out.push_back(U' ');
    } else {
      const std::u32string_view tag = text.substr(i + 1, end - i - 1);
      hashtags.push_back(utf8::encode(tag));
      out += tag;
    }
    i = end;
  }
  return out;
}

std::u32string expand_contractions_cp(std::u32string_view text) {
  const auto& table = contraction_table();
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (!is_word_char(text[i]) && !is_apostrophe(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    bool has_apostrophe = false;
    while (end < text.size() && (is_word_char(text[end]) || is_apostrophe(text[end]))) {
      has_apostrophe = has_apostrophe || is_apostrophe(text[end]);
      ++end;
    }
    const std::u32string_view word = text.substr(i, end - i);
    if (has_apostrophe) {
      std::string key;
      for (char32_t cp : word) utf8::append(key, cp == kRightQuote ? U'\'' : utf8::to_lower(cp));
      if (const auto it = table.find(key); it != table.end()) {
        std::u32string expansion = utf8::decode(it->second);
        if (utf8::is_upper(word.front()) && !expansion.empty() && expansion.front() >= U'a' &&
            expansion.front() <= U'z') {
          expansion.front() = expansion.front() - 32;
        }
        out += expansion;
        i = end;
        continue;
      }
    }
    out += word;
    i = end;
  }
  return out;
}

std::u32string remove_mentions(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] != U'@') {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i + 1;
    while (end < text.size() && is_word_char(text[end])) ++end;
    out.push_back(U' ');
    i = end;
  }
  return out;
}

std::u32string lowercase(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t& cp : out) cp = utf8::to_lower(cp);
  return out;
}

}  // namespace

std::size_t emoji_table_size() { return emoji_table().size(); }

std::string emojis_to_aliases(std::string_view text) {
  return utf8::encode(replace_emojis(utf8::decode(text)));
}

std::string expand_contractions(std::string_view text) {
  return utf8::encode(expand_contractions_cp(utf8::decode(text)));
}

CleanedText clean_tweet(std::string_view raw) {
  CleanedText result;
  std::u32string text = utf8::decode(raw);
  text = replace_emojis(text);                       // 1
  text = extract_hashtags(text, result.hashtags);   // 2
  text = expand_contractions_cp(text);               // 3
  text = collapse_whitespace(text);                  // 4
  text = strip_leading_retweet(std::move(text));     // 5
  text = remove_mentions(text);                      // 6
  // Removing mentions can expose whitespace or a leading "RT"; settle both
  // so that cleaning is idempotent.
  text = strip_leading_retweet(collapse_whitespace(text));
  text = lowercase(text);                            // 7
  result.text = utf8::encode(text);
  for (std::string& tag : result.hashtags) tag = utf8::encode(lowercase(utf8::decode(tag)));
  return result;
}

CleanExample clean_example(const RawExample& raw) {
  CleanedText cleaned = clean_tweet(raw.text);
  return CleanExample{raw.id, std::move(cleaned.text), std::move(cleaned.hashtags), raw.emotion,
                      map_emotion_to_sentiment(raw.emotion)};
}

FilterResult filter_by_sentiment_agreement(
    const std::vector<CleanExample>& examples,
    const std::unordered_map<std::string, ExternalSentiment>& predictions) {
  std::vector<std::string> missing;
  for (const CleanExample& e : examples)
    if (!predictions.contains(e.id)) missing.push_back(e.id);
  if (!missing.empty()) {
    fail(ErrorCode::kMissingPrediction,
         fmt::format("no prediction for {} example(s): {}", missing.size(), fmt::join(missing, ", ")));
  }
  FilterResult result;
  for (const CleanExample& e : examples) {
    const ExternalSentiment predicted = predictions.at(e.id);
    if (predicted == ExternalSentiment::kNeutral) {
      ++result.stats.dropped_neutral;
      continue;
    }
    const bool positive = predicted == ExternalSentiment::kPositive;
    if (positive != (e.sentiment == Sentiment::kPositive)) {
      ++result.stats.dropped_mismatch;
      continue;
    }
    result.kept.push_back(e);
  }
  result.stats.kept = result.kept.size();
  return result;
}

std::vector<std::string> tokenize(std::string_view clean_text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t cp : utf8::decode(clean_text)) {
    if (utf8::is_space(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      utf8::append(current, cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// ---------------------------------------------------------------------------
// Vocabulary and encoding

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             std::size_t min_count, std::size_t max_size) {
  if (corpus.empty()) fail(ErrorCode::kInvalidArgument, "cannot build a vocabulary from no documents");
  if (max_size < 2) fail(ErrorCode::kInvalidArgument, "vocabulary max_size must be >= 2");
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus)
    for (const auto& tok : doc) ++counts[tok];
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [tok, n] : counts) {
    if (n < std::max<std::size_t>(min_count, 1) || tok == kPadToken || tok == kUnkToken) continue;
    ranked.emplace_back(tok, n);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens{std::string(kPadToken), std::string(kUnkToken)};
  for (auto& [tok, n] : ranked) {
    if (tokens.size() >= max_size) break;
    tokens.push_back(tok);
  }
  return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[kPad] != kPadToken || tokens[kUnk] != kUnkToken) {
    fail(ErrorCode::kInvalidArgument, "vocabulary must start with the PAD and UNK tokens");
  }
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  for (std::size_t i = 2; i < v.tokens_.size(); ++i) {
    if (!v.index_.emplace(v.tokens_[i], i).second) {
      fail(ErrorCode::kInvalidArgument, fmt::format("duplicate vocabulary token '{}'", v.tokens_[i]));
    }
  }
  return v;
}

std::size_t Vocabulary::id(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

std::uint32_t Vocabulary::checksum() const {
  uLong crc = crc32(0L, Z_NULL, 0);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i) crc = crc32(crc, reinterpret_cast<const Bytef*>("\n"), 1);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(tokens_[i].data()),
                static_cast<uInt>(tokens_[i].size()));
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<bool> EncodedExample::padding() const {
  std::vector<bool> mask(token_ids.size());
  for (std::size_t i = 0; i < token_ids.size(); ++i) mask[i] = token_ids[i] == Vocabulary::kPad;
  return mask;
}

std::size_t EncodedExample::length() const {
  return static_cast<std::size_t>(
      std::count_if(token_ids.begin(), token_ids.end(),
                    [](std::size_t id) { return id != Vocabulary::kPad; }));
}

EncodedExample encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                      std::size_t max_len, std::size_t class_id) {
  if (max_len == 0) fail(ErrorCode::kInvalidArgument, "max_len must be >= 1");
  EncodedExample out;
  out.class_id = class_id;
  out.token_ids.assign(max_len, Vocabulary::kPad);
  const std::size_t n = std::min(tokens.size(), max_len);
  for (std::size_t i = 0; i < n; ++i) out.token_ids[i] = vocab.id(tokens[i]);
  if (n == 0) fail(ErrorCode::kEmptyAfterEncoding, "no tokens left after encoding");
  return out;
}

}  // namespace ttrnn::text
