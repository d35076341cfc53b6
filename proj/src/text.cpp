// SPDX-License-Identifier: Apache-2.0
#include "lexpand/text.hpp"

namespace lexpand::text {

CodePoint next_code_point(std::string_view s, std::size_t pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) return {lead, 1, true};

  std::size_t length = 0;
  char32_t value = 0;
  char32_t minimum = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2;
    value = lead & 0x1F;
    minimum = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    value = lead & 0x0F;
    minimum = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    value = lead & 0x07;
    minimum = 0x10000;
  } else {
    return {lead, 1, false};
  }
  if (pos + length > s.size()) return {lead, 1, false};
  for (std::size_t i = 1; i < length; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) return {lead, 1, false};
    value = (value << 6) | (c & 0x3F);
  }
  if (value < minimum || value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) {
    return {lead, 1, false};
  }
  return {value, length, true};
}

bool is_whitespace(char32_t c) {
  switch (c) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
    case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_valid_utf8(std::string_view s) {
  for (std::size_t pos = 0; pos < s.size();) {
    const CodePoint cp = next_code_point(s, pos);
    if (!cp.valid) return false;
    pos += cp.length;
  }
  return true;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

bool sanitize_utf8(std::string_view in, std::string& out) {
  out.clear();
  out.reserve(in.size());
  bool replaced = false;
  for (std::size_t pos = 0; pos < in.size();) {
    const CodePoint cp = next_code_point(in, pos);
    if (cp.valid) {
      out.append(in.substr(pos, cp.length));
    } else {
      append_utf8(out, kReplacementCodePoint);
      replaced = true;
    }
    pos += cp.length;
  }
  return replaced;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t start = std::string_view::npos;
  for (std::size_t pos = 0; pos < s.size();) {
    const CodePoint cp = next_code_point(s, pos);
    const bool space = cp.valid && is_whitespace(cp.value);
    if (space && start != std::string_view::npos) {
      words.push_back(s.substr(start, pos - start));
      start = std::string_view::npos;
    } else if (!space && start == std::string_view::npos) {
      start = pos;
    }
    pos += cp.length;
  }
  if (start != std::string_view::npos) words.push_back(s.substr(start));
  return words;
}

std::size_t count_words(std::string_view s) {
  std::size_t count = 0;
  bool in_word = false;
  for (std::size_t pos = 0; pos < s.size();) {
    const CodePoint cp = next_code_point(s, pos);
    const bool space = cp.valid && is_whitespace(cp.value);
    if (!space && !in_word) ++count;
    in_word = !space;
    pos += cp.length;
  }
  return count;
}

bool is_blank(std::string_view s) { return count_words(s) == 0; }

}  // namespace lexpand::text
