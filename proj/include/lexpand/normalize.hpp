// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lexpand::text {

/// NFKC normalization combined with Unicode case folding.
std::string fold_case(std::string_view s);

/// Folded form of a single word with leading and trailing punctuation
/// removed. Pure-punctuation words fold to the empty string.
std::string fold_word(std::string_view word);

/// Dedup key: casefold + compatibility normalization, punctuation removed,
/// whitespace runs collapsed to one ASCII space, ends trimmed.
std::string normalize_for_dedup(std::string_view s);

/// Word list matched on folded forms.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<std::string>& words);

  bool contains_folded(const std::string& folded) const {
    return words_.count(folded) != 0;
  }
  bool contains(std::string_view word) const { return contains_folded(fold_word(word)); }
  bool empty() const { return words_.empty(); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Shipped Arabic + English stopword list.
const std::vector<std::string>& default_stopwords();

std::vector<std::string> load_word_list(const std::string& path);

}  // namespace lexpand::text
