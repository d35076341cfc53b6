// SPDX-License-Identifier: Apache-2.0
#include "lexpand/normalize.hpp"

#include <fstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "lexpand/error.hpp"
#include "lexpand/text.hpp"

namespace lexpand::text {
namespace {

icu::UnicodeString folded_unicode(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc_cf = icu::Normalizer2::getNFKCCasefoldInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFKC_Casefold data unavailable");
  const icu::UnicodeString source =
      icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString result = nfkc_cf->normalize(source, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  return result;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace

std::string fold_case(std::string_view s) { return to_utf8(folded_unicode(s)); }

std::string fold_word(std::string_view word) {
  const icu::UnicodeString folded = folded_unicode(word);
  int32_t begin = 0;
  int32_t end = folded.length();
  while (begin < end && u_ispunct(folded.char32At(begin))) begin = folded.moveIndex32(begin, 1);
  while (end > begin) {
    const int32_t prev = folded.moveIndex32(end, -1);
    if (!u_ispunct(folded.char32At(prev))) break;
    end = prev;
  }
  return to_utf8(folded.tempSubStringBetween(begin, end));
}

std::string normalize_for_dedup(std::string_view s) {
  const icu::UnicodeString folded = folded_unicode(s);
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (int32_t i = 0; i < folded.length(); i = folded.moveIndex32(i, 1)) {
    const UChar32 c = folded.char32At(i);
    if (u_ispunct(c)) continue;
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, static_cast<char32_t>(c));
  }
  return out;
}

Lexicon::Lexicon(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    std::string folded = fold_word(w);
    if (!folded.empty()) words_.insert(std::move(folded));
  }
}

std::vector<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open word list: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto w : split_words(line)) {
      if (w.front() == '#') break;
      words.emplace_back(w);
    }
  }
  return words;
}

}  // namespace lexpand::text
