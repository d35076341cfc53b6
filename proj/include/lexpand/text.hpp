// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lexpand::text {

/// U+2581 LOWER ONE EIGHTH BLOCK, the word-boundary marker carried by token surfaces.
inline constexpr std::string_view kMetaspace = "\xE2\x96\x81";
inline constexpr char32_t kMetaspaceCodePoint = 0x2581;
inline constexpr char32_t kReplacementCodePoint = 0xFFFD;

/// One decoded UTF-8 code point. Invalid bytes decode as a single-byte
/// unit with `valid == false` so callers can keep walking the input.
struct CodePoint {
  char32_t value = 0;
  std::size_t length = 0;
  bool valid = false;
};

CodePoint next_code_point(std::string_view s, std::size_t pos);

/// Unicode White_Space property.
bool is_whitespace(char32_t c);

bool is_valid_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t c);

/// Replaces every invalid byte sequence with U+FFFD. Returns true when
/// something was replaced.
bool sanitize_utf8(std::string_view in, std::string& out);

/// Words are maximal runs of non-whitespace code points.
std::vector<std::string_view> split_words(std::string_view s);
std::size_t count_words(std::string_view s);

bool is_blank(std::string_view s);

}  // namespace lexpand::text
