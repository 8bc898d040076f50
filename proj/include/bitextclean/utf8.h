// Copyright 2026 The bitextclean Authors.
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

#ifndef BITEXTCLEAN_UTF8_H_
#define BITEXTCLEAN_UTF8_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 and character-class helpers. Case mapping covers Latin,
// Greek and Cyrillic; other scripts are treated as caseless letters.
namespace bitext::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at s[*pos] and advances *pos. Invalid
// sequences yield kReplacement and consume one byte.
char32_t Next(std::string_view s, size_t* pos);

void Append(std::string* out, char32_t cp);
std::string Encode(char32_t cp);

std::u32string Decode(std::string_view s);
std::string Encode(std::u32string_view s);

// Replaces every invalid byte sequence with U+FFFD. Returns true if the
// input was already valid.
bool Sanitize(std::string_view in, std::string* out);

size_t Length(std::string_view s);

char32_t ToLower(char32_t cp);
char32_t ToUpper(char32_t cp);
std::string ToLower(std::string_view s);

bool IsDigit(char32_t cp);
bool IsSpace(char32_t cp);
bool IsPunct(char32_t cp);
bool IsLetter(char32_t cp);
inline bool IsAlnum(char32_t cp) { return IsLetter(cp) || IsDigit(cp); }
bool IsUpper(char32_t cp);
bool IsLower(char32_t cp);

// Whitespace tokenization (ASCII space and tab).
std::vector<std::string> SplitWhitespace(std::string_view s);
std::vector<std::string_view> SplitWhitespaceView(std::string_view s);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace bitext::utf8

#endif  // BITEXTCLEAN_UTF8_H_
