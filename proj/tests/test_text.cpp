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

#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "ttrnn/text.hpp"

namespace ttrnn::text {
namespace {

TEST(Clean, DocumentedExamples) {
  EXPECT_EQ(clean_tweet("I'm happy").text, "i am happy");
  const CleanedText c = clean_tweet("RT @user Hello   World\n#Fun");
  EXPECT_EQ(c.text, "hello world fun");
  EXPECT_EQ(c.hashtags, std::vector<std::string>{"fun"});
  const CleanedText empty = clean_tweet("");
  EXPECT_EQ(empty.text, "");
  EXPECT_TRUE(empty.hashtags.empty());
}

TEST(Clean, EmojiAliases) {
  EXPECT_EQ(clean_tweet("I ❤️ you\U0001F602").text, "i :red_heart: you :face_with_tears_of_joy:");
  EXPECT_EQ(emojis_to_aliases("ok\U0001F44D"), "ok :thumbs_up: ");
  // U+2764 alone and with the variation selector map to the same alias.
  EXPECT_EQ(clean_tweet("❤").text, clean_tweet("❤️").text);
  EXPECT_EQ(clean_tweet("café 中").text, "café 中");
  EXPECT_GT(emoji_table_size(), 1000u);
}

TEST(Clean, Contractions) {
  EXPECT_EQ(expand_contractions("Don't go"), "Do not go");
  EXPECT_EQ(expand_contractions("I’m here"), "I am here");
  EXPECT_EQ(expand_contractions("the dog's bone"), "the dog's bone");
  EXPECT_EQ(clean_tweet("YOU'RE late").text, "you are late");
  EXPECT_EQ(clean_tweet("can't won't").text, "cannot will not");
}

TEST(Clean, RetweetOnlyWhenLeadingStandalone) {
  EXPECT_EQ(clean_tweet("RT RT great start").text, "great start");
  EXPECT_EQ(clean_tweet("rt yes").text, "yes");
  EXPECT_EQ(clean_tweet("start RT middle").text, "start rt middle");
  EXPECT_EQ(clean_tweet("RTX smart").text, "rtx smart");
  EXPECT_EQ(clean_tweet("@a RT @b hi").text, "hi");
}

TEST(Clean, HashtagsKeepTheWord) {
  const CleanedText c = clean_tweet("#Monday #blues are #SO_real # alone");
  EXPECT_EQ(c.text, "monday blues are so_real alone");
  EXPECT_EQ(c.hashtags, (std::vector<std::string>{"monday", "blues", "so_real"}));
}

TEST(Clean, MentionsAndStrayAt) {
  EXPECT_EQ(clean_tweet("hey @bob_99, see you @ noon").text, "hey , see you noon");
  EXPECT_EQ(clean_tweet("@only").text, "");
}

bool has_ascii_upper(const std::string& s) {
  for (char ch : s)
    if (ch >= 'A' && ch <= 'Z') return true;
  return false;
}

void check_clean_invariants(const std::string& raw) {
  const CleanedText once = clean_tweet(raw);
  const std::string& t = once.text;
  SCOPED_TRACE("input: " + raw);
  EXPECT_EQ(clean_tweet(t).text, t);
  EXPECT_EQ(t.find('@'), std::string::npos);
  EXPECT_EQ(t.find('#'), std::string::npos);
  EXPECT_EQ(t.find('\n'), std::string::npos);
  EXPECT_EQ(t.find("  "), std::string::npos);
  EXPECT_FALSE(has_ascii_upper(t));
  if (!t.empty()) {
    EXPECT_NE(t.front(), ' ');
    EXPECT_NE(t.back(), ' ');
  }
  const std::vector<std::string> tokens = tokenize(t);
  if (!tokens.empty()) EXPECT_NE(tokens.front(), "rt");
  for (const std::string& tag : once.hashtags) {
    EXPECT_FALSE(tag.empty());
    EXPECT_FALSE(has_ascii_upper(tag));
  }
}

TEST(Clean, FuzzedInvariantsAndIdempotence) {
  const std::vector<std::string> pieces = {
      "RT", "rt", "@", "@user", "#", "#Tag", "I'm", "don't", "DON’T", " ", "  ", "\n", "\t",
      "\r\n", "Hello", "wORLD", "❤️", "\U0001F602", "Été", "'", "’", ",",
      "!", "x", "1", "_", "　", ":", "it's", "@#", "#@", "RT:", "Rt"};
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> length(0, 12);
  for (int trial = 0; trial < 3000; ++trial) {
    std::string raw;
    const int n = length(rng);
    for (int i = 0; i < n; ++i) raw += pieces[pick(rng)];
    check_clean_invariants(raw);
  }
  for (const char* fixed : {"RT @user Hello   World\n#Fun", "I'm happy", "  \n ", "@", "#", "RT",
                            "RT @a @b RT c", "#a#b#c", "a@b"}) {
    check_clean_invariants(fixed);
  }
}

TEST(Labels, SentimentTableIsTotalAndSurjective) {
  EXPECT_EQ(map_emotion_to_sentiment(Emotion::kAngry), Sentiment::kNegative);
  EXPECT_EQ(map_emotion_to_sentiment(Emotion::kBad), Sentiment::kNegative);
  EXPECT_EQ(map_emotion_to_sentiment(Emotion::kFearful), Sentiment::kNegative);
  EXPECT_EQ(map_emotion_to_sentiment(Emotion::kSad), Sentiment::kNegative);
  EXPECT_EQ(map_emotion_to_sentiment(Emotion::kHappy), Sentiment::kPositive);
  EXPECT_EQ(map_emotion_to_sentiment("Surprised"), Sentiment::kPositive);
  EXPECT_EQ(parse_emotion("hApPy"), Emotion::kHappy);
  EXPECT_ERROR_CODE(map_emotion_to_sentiment("Bored"), ErrorCode::kUnknownEmotion);
  for (Emotion e : kAllEmotions) EXPECT_EQ(parse_emotion(emotion_name(e)), e);
  EXPECT_EQ(parse_external_sentiment("Neutral"), ExternalSentiment::kNeutral);
  EXPECT_ERROR_CODE(parse_external_sentiment("meh"), ErrorCode::kParseError);
}

CleanExample example(std::string id, Emotion e) {
  return clean_example(RawExample{std::move(id), "some text", e});
}

TEST(Filter, AgreementRules) {
  const std::vector<CleanExample> data = {example("happy-neg", Emotion::kHappy),
                                          example("sad-neutral", Emotion::kSad),
                                          example("angry-neg", Emotion::kAngry),
                                          example("surprised-pos", Emotion::kSurprised)};
  const std::unordered_map<std::string, ExternalSentiment> preds = {
      {"happy-neg", ExternalSentiment::kNegative},
      {"sad-neutral", ExternalSentiment::kNeutral},
      {"angry-neg", ExternalSentiment::kNegative},
      {"surprised-pos", ExternalSentiment::kPositive}};
  const FilterResult r = filter_by_sentiment_agreement(data, preds);
  ASSERT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.kept[0].id, "angry-neg");
  EXPECT_EQ(r.kept[1].id, "surprised-pos");
  EXPECT_EQ(r.stats.kept, 2u);
  EXPECT_EQ(r.stats.dropped_mismatch, 1u);
  EXPECT_EQ(r.stats.dropped_neutral, 1u);
}

TEST(Filter, MissingPredictionsAreListed) {
  const std::vector<CleanExample> data = {example("a", Emotion::kHappy), example("b", Emotion::kSad),
                                          example("c", Emotion::kBad)};
  try {
    filter_by_sentiment_agreement(data, {{"b", ExternalSentiment::kNegative}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingPrediction);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("a"), std::string::npos);
    EXPECT_NE(msg.find("c"), std::string::npos);
  }
}

TEST(Tokenize, WhitespaceSplit) {
  EXPECT_EQ(tokenize("i am happy :red_heart:"),
            (std::vector<std::string>{"i", "am", "happy", ":red_heart:"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("a　b c\td"), (std::vector<std::string>{"a", "b", "c", "d"}));
  const std::vector<std::string> tokens = tokenize("x  y :a: z");
  std::string joined;
  for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
  EXPECT_EQ(tokenize(joined), tokens);
}

TEST(Vocabulary, CountThenLexicographic) {
  const Vocabulary v = Vocabulary::build({{"a", "a", "b"}}, 1, 100);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v.token(Vocabulary::kPad), "<pad>");
  EXPECT_EQ(v.token(Vocabulary::kUnk), "<unk>");
  // Reserved spellings appearing in text are unknown words, never padding.
  EXPECT_EQ(v.id("<pad>"), Vocabulary::kUnk);
  EXPECT_EQ(v.id("a"), 2u);
  EXPECT_EQ(v.id("b"), 3u);
  const Vocabulary w = Vocabulary::build({{"d", "c"}, {"b", "c", "a"}}, 1, 100);
  EXPECT_EQ(w.tokens(), (std::vector<std::string>{"<pad>", "<unk>", "c", "a", "b", "d"}));
}

TEST(Vocabulary, ThresholdCapAndDeterminism) {
  const std::vector<std::vector<std::string>> corpus = {{"x", "y", "y", "z", "z", "z"}};
  const Vocabulary v = Vocabulary::build(corpus, 2, 100);
  EXPECT_EQ(v.id("x"), Vocabulary::kUnk);
  EXPECT_EQ(encode({"x"}, v, 3).token_ids[0], Vocabulary::kUnk);
  const Vocabulary capped = Vocabulary::build(corpus, 1, 3);
  EXPECT_EQ(capped.tokens(), (std::vector<std::string>{"<pad>", "<unk>", "z"}));
  const Vocabulary again = Vocabulary::build(corpus, 2, 100);
  EXPECT_EQ(v.tokens(), again.tokens());
  EXPECT_EQ(v.checksum(), again.checksum());
  EXPECT_NE(v.checksum(), capped.checksum());
  EXPECT_ERROR_CODE(Vocabulary::build(corpus, 1, 1), ErrorCode::kInvalidArgument);
}

TEST(Vocabulary, FromTokensValidates) {
  const Vocabulary v = Vocabulary::from_tokens({"<pad>", "<unk>", "hi"});
  EXPECT_EQ(v.id("hi"), 2u);
  EXPECT_ERROR_CODE(Vocabulary::from_tokens({"<unk>", "<pad>"}), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(Vocabulary::from_tokens({"<pad>", "<unk>", "a", "a"}), ErrorCode::kInvalidArgument);
}

TEST(Encode, TruncatePadAndMask) {
  const Vocabulary v = Vocabulary::build({{"a", "b", "c"}}, 1, 100);
  const EncodedExample short_one = encode({"a", "zzz"}, v, 4, 3);
  EXPECT_EQ(short_one.token_ids, (std::vector<std::size_t>{v.id("a"), Vocabulary::kUnk, 0, 0}));
  EXPECT_EQ(short_one.class_id, 3u);
  EXPECT_EQ(short_one.padding(), (std::vector<bool>{false, false, true, true}));
  const EncodedExample long_one = encode({"a", "b", "c", "a", "b"}, v, 3);
  EXPECT_EQ(long_one.token_ids, (std::vector<std::size_t>{v.id("a"), v.id("b"), v.id("c")}));
  for (std::size_t n = 1; n < 10; ++n) {
    for (std::size_t max_len = 1; max_len < 8; ++max_len) {
      const EncodedExample e = encode(std::vector<std::string>(n, "b"), v, max_len);
      EXPECT_EQ(e.length(), std::min(n, max_len));
      EXPECT_EQ(e.token_ids.size(), max_len);
      for (std::size_t id : e.token_ids) EXPECT_LT(id, v.size());
    }
  }
  EXPECT_ERROR_CODE(encode({}, v, 4), ErrorCode::kEmptyAfterEncoding);
  EXPECT_ERROR_CODE(encode({"a"}, v, 0), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace ttrnn::text
