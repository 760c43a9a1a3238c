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

#include "ttrnn/synthetic.hpp"

#include <array>
#include <string_view>

#include <fmt/format.h>

#include "ttrnn/rng.hpp"

namespace ttrnn::synthetic {

namespace {

using Words = std::array<std::string_view, 10>;

// Keywords per class, in text::kAllEmotions order.
constexpr std::array<Words, 6> kKeywords = {{
    {"furious", "outraged", "livid", "rage", "infuriating", "fuming", "hostile", "irate", "seething", "resent"},
    {"awful", "terrible", "gross", "dreadful", "miserable", "rotten", "nasty", "lousy", "horrid", "yuck"},
    {"scared", "terrified", "afraid", "panic", "frightened", "nervous", "dread", "anxious", "petrified", "uneasy"},
    {"delighted", "joyful", "wonderful", "cheerful", "grateful", "thrilled", "blessed", "smiling", "glad", "lovely"},
    {"heartbroken", "lonely", "crying", "grief", "sorrow", "gloomy", "tears", "mourning", "depressed", "hopeless"},
    {"astonished", "unexpected", "shocked", "stunned", "wow", "speechless", "amazed", "unbelievable", "whoa", "startled"},
}};

constexpr std::array<std::string_view, 48> kFiller = {
    "the", "a", "today", "this", "morning", "after", "work", "with", "my", "friends",
    "about", "news", "again", "just", "saw", "that", "game", "last", "night", "and",
    "now", "city", "weather", "train", "coffee", "phone", "still", "really", "so", "at",
    "home", "weekend", "people", "movie", "dinner", "class", "office", "traffic", "update", "team",
    "for", "on", "in", "of", "it", "was", "feeling", "everyone"};

constexpr std::array<std::string_view, 6> kContractionsFiller = {"I'm", "don't", "it's", "can't", "we're",
                                                                 "didn't"};
constexpr std::array<std::string_view, 5> kEmoji = {"\xF0\x9F\x91\x8D", "\xF0\x9F\x8E\x89",
                                                    "\xF0\x9F\x98\x82", "\xF0\x9F\x93\xB1",
                                                    "\xE2\x98\x95"};

template <typename Array>
std::string_view choose(const Array& words, SplitMix64& rng) {
  return words[rng.uniform_index(words.size())];
}

}  // namespace

std::vector<text::RawExample> generate(std::size_t count, std::uint64_t seed) {
  std::vector<text::RawExample> out;
  out.reserve(count);
  const SplitMix64 root(seed);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng = root.split(i);
    const std::size_t label = i % kKeywords.size();
    std::vector<std::string> words;
    const std::size_t filler = 5 + rng.uniform_index(8);
    for (std::size_t k = 0; k < filler; ++k) words.emplace_back(choose(kFiller, rng));
    if (rng.uniform() < 0.3) words.insert(words.begin(), std::string(choose(kContractionsFiller, rng)));
    const std::size_t keywords = 1 + rng.uniform_index(2);
    for (std::size_t k = 0; k < keywords; ++k) {
      std::string word(choose(kKeywords[label], rng));
      if (rng.uniform() < 0.2) word = "#" + word;
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(words.size() + 1)), word);
    }
    if (rng.uniform() < 0.15) words.emplace_back(choose(kEmoji, rng));
    if (rng.uniform() < 0.3 && words.front()[0] >= 'a' && words.front()[0] <= 'z') {
      words.front()[0] = static_cast<char>(words.front()[0] - 'a' + 'A');
    }
    std::string tweet;
    if (rng.uniform() < 0.2) tweet = fmt::format("RT @user{} ", rng.uniform_index(1000));
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (k) tweet += ' ';
      tweet += words[k];
    }
    out.push_back({fmt::format("syn-{:04d}", i + 1), std::move(tweet), text::kAllEmotions[label]});
  }
  return out;
}

std::string to_csv(const std::vector<text::RawExample>& examples) {
  std::string out = "id,text,label\n";
  for (const text::RawExample& e : examples) {
    std::string quoted;
    for (char c : e.text) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    out += fmt::format("{},\"{}\",{}\n", e.id, quoted, text::emotion_name(e.emotion));
  }
  return out;
}

}  // namespace ttrnn::synthetic
