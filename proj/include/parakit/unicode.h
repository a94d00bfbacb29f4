// Copyright 2026 The Parakit Authors
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

// Minimal UTF-8 and character-class helpers shared by the tokenizer, the
// fallback embedder and the text trimming rules.

#ifndef PARAKIT_UNICODE_H_
#define PARAKIT_UNICODE_H_

#include <string>
#include <string_view>

namespace parakit::unicode {

inline constexpr char32_t kReplacementChar = 0xFFFD;

/// Decodes UTF-8. Ill-formed sequences decode to U+FFFD, one per bad byte.
std::u32string Decode(std::string_view utf8);

std::string Encode(std::u32string_view text);
void AppendUtf8(std::string& out, char32_t cp);

bool IsValidUtf8(std::string_view bytes);

/// The Unicode White_Space property.
bool IsSpace(char32_t cp);

/// ASCII punctuation and symbols plus the common Unicode punctuation
/// blocks (Latin-1 punctuation, General Punctuation, CJK and fullwidth
/// punctuation, Supplemental Punctuation).
bool IsPunct(char32_t cp);

/// Simple one-to-one lowercase mapping for ASCII, Latin-1, Latin
/// Extended-A, Greek and Cyrillic. Other code points map to themselves.
char32_t FoldCase(char32_t cp);

std::string FoldCase(std::string_view utf8);

/// Removes leading and trailing White_Space code points.
std::string Trim(std::string_view utf8);

}  // namespace parakit::unicode

#endif  // PARAKIT_UNICODE_H_
