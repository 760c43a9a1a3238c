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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ttrnn::text {

enum class Emotion { kAngry, kBad, kFearful, kHappy, kSad, kSurprised };
enum class Sentiment { kPositive, kNegative };
/// Output of an external three-way sentiment model.
enum class ExternalSentiment { kPositive, kNegative, kNeutral };

inline constexpr std::array<Emotion, 6> kAllEmotions = {
    Emotion::kAngry, Emotion::kBad, Emotion::kFearful,
    Emotion::kHappy, Emotion::kSad, Emotion::kSurprised};

std::string_view emotion_name(Emotion emotion);
/// Case-insensitive; throws UnknownEmotion outside the six-class set.
Emotion parse_emotion(std::string_view name);
std::string_view sentiment_name(Sentiment sentiment);
std::string_view external_sentiment_name(ExternalSentiment sentiment);
ExternalSentiment parse_external_sentiment(std::string_view name);

/// Angry, Bad, Fearful, Sad -> Negative; Happy, Surprised -> Positive.
Sentiment map_emotion_to_sentiment(Emotion emotion);
Sentiment map_emotion_to_sentiment(std::string_view emotion);

struct RawExample {
  std::string id;
  std::string text;
  Emotion emotion;
};

struct CleanedText {
  std::string text;
  std::vector<std::string> hashtags;
};

struct CleanExample {
  std::string id;
  std::string clean_text;
  std::vector<std::string> hashtags;
  Emotion emotion;
  Sentiment sentiment;
};

/// Tweet normalization, in order:
///   1. emoji -> ":alias:" (bundled alias table, longest match)
///   2. "#word" -> "word", with "word" appended to the hashtag list
///   3. contraction expansion ("I'm" -> "I am")
///   4. whitespace runs collapsed, ends trimmed
///   5. leading standalone "RT" tokens removed
///   6. "@mention" tokens and stray "@" removed
///   7. lowercase (text and hashtags)
/// The result is a fixed point: clean_tweet(clean_tweet(t).text).text equals
/// clean_tweet(t).text.
CleanedText clean_tweet(std::string_view raw);
CleanExample clean_example(const RawExample& raw);

/// Step 1 alone. Aliases are padded with spaces; unknown emoji pass through.
std::string emojis_to_aliases(std::string_view text);
/// Step 3 alone.
std::string expand_contractions(std::string_view text);
std::size_t emoji_table_size();

struct FilterStats {
  std::size_t kept = 0;
  std::size_t dropped_mismatch = 0;
  std::size_t dropped_neutral = 0;
};

struct FilterResult {
  std::vector<CleanExample> kept;
  FilterStats stats;
};

/// Keeps an example iff the external prediction equals its label-derived
/// sentiment. Neutral predictions are always dropped. Throws
/// MissingPrediction listing every id without a prediction.
FilterResult filter_by_sentiment_agreement(
    const std::vector<CleanExample>& examples,
    const std::unordered_map<std::string, ExternalSentiment>& predictions);

/// Splits on Unicode whitespace.
std::vector<std::string> tokenize(std::string_view clean_text);

class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

  /// Tokens with count >= min_count, ordered by descending count then
  /// lexicographically, truncated so size() <= max_size (PAD and UNK included).
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t min_count, std::size_t max_size);
  /// Rebuilds from a token list in id order (as stored in a model file).
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  /// kUnk for unknown tokens.
  std::size_t id(std::string_view token) const;
  const std::string& token(std::size_t id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  /// CRC-32 of the tokens joined by '\n'.
  std::uint32_t checksum() const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct EncodedExample {
  std::vector<std::size_t> token_ids;  // length max_len, right-padded with kPad
  std::size_t class_id = 0;

  std::vector<bool> padding() const;
  std::size_t length() const;  // number of non-PAD positions
};

/// Truncates on the right at max_len, pads right with PAD, maps OOV to UNK.
/// Throws EmptyAfterEncoding when nothing but padding remains.
EncodedExample encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                      std::size_t max_len, std::size_t class_id = 0);

}  // namespace ttrnn::text
