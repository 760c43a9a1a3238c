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

#include <string>
#include <string_view>
#include <vector>

namespace ttrnn::utf8 {

/// Decodes UTF-8; malformed sequences become U+FFFD.
std::u32string decode(std::string_view text);
void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view cps);

/// Unicode White_Space property.
bool is_space(char32_t cp) noexcept;
/// Simple lowercase mapping for ASCII, Latin-1, Latin Extended-A, Greek and
/// Cyrillic capitals; other code points are returned unchanged.
char32_t to_lower(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;

}  // namespace ttrnn::utf8
