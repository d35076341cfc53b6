// SPDX-License-Identifier: Apache-2.0
// Slow reference BPE used as a test oracle. It re-counts every adjacent pair
// over every word occurrence at each step and shares no code with the
// library trainer.
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace refbpe {

inline const std::string kMarker = "\xE2\x96\x81";

using Word = std::vector<std::string>;  // symbol surfaces

/// Splits on single ASCII spaces; every word starts with the marker symbol
/// followed by one symbol per byte. Only valid for text without other
/// whitespace, leading/trailing spaces or space runs.
inline std::vector<Word> words_of(const std::string& text) {
  std::vector<Word> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(' ', pos);
    if (end == std::string::npos) end = text.size();
    if (end > pos) {
      Word w{kMarker};
      for (std::size_t i = pos; i < end; ++i) w.push_back(std::string(1, text[i]));
      out.push_back(std::move(w));
    }
    pos = end + 1;
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> train(
    const std::vector<std::string>& corpus, std::size_t vocab_size, std::size_t num_specials) {
  std::vector<Word> words;
  for (const auto& doc : corpus) {
    for (auto& w : words_of(doc)) words.push_back(std::move(w));
  }
  std::set<std::string> vocab;
  for (int b = 0; b < 256; ++b) vocab.insert(std::string(1, static_cast<char>(b)));
  vocab.insert(kMarker);
  std::size_t size = 257 + num_specials;

  std::vector<std::pair<std::string, std::string>> merges;
  while (size < vocab_size) {
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (const auto& w : words) {
      for (std::size_t i = 0; i + 1 < w.size(); ++i) ++counts[{w[i], w[i + 1]}];
    }
    if (counts.empty()) break;
    const std::pair<std::string, std::string>* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [pair, n] : counts) {
      if (best == nullptr || n > best_count) {
        best = &pair;
        best_count = n;
        continue;
      }
      if (n < best_count) continue;
      const std::string cat = pair.first + pair.second;
      const std::string best_cat = best->first + best->second;
      if (cat < best_cat || (cat == best_cat && pair.first < best->first)) best = &pair;
    }
    const auto chosen = *best;
    merges.push_back(chosen);
    const std::string joined = chosen.first + chosen.second;
    if (vocab.insert(joined).second) ++size;
    for (auto& w : words) {
      Word next;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i + 1 < w.size() && w[i] == chosen.first && w[i + 1] == chosen.second) {
          next.push_back(joined);
          ++i;
        } else {
          next.push_back(w[i]);
        }
      }
      w = std::move(next);
    }
  }
  return merges;
}

/// Applies merges to one word: repeatedly merge every occurrence of the
/// lowest-ranked adjacent pair, left to right.
inline Word apply(const std::vector<std::pair<std::string, std::string>>& merges, Word w) {
  std::map<std::pair<std::string, std::string>, std::size_t> rank;
  for (std::size_t r = 0; r < merges.size(); ++r) rank.emplace(merges[r], r);
  while (true) {
    std::size_t best = merges.size();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      auto it = rank.find({w[i], w[i + 1]});
      if (it != rank.end() && it->second < best) best = it->second;
    }
    if (best == merges.size()) return w;
    const auto& [l, r] = merges[best];
    Word next;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i + 1 < w.size() && w[i] == l && w[i + 1] == r) {
        next.push_back(l + r);
        ++i;
      } else {
        next.push_back(w[i]);
      }
    }
    w = std::move(next);
  }
}

/// A token surface as the symbol sequence encode would start from.
inline Word symbols_of_surface(const std::string& surface) {
  Word w;
  std::size_t i = 0;
  if (surface.compare(0, kMarker.size(), kMarker) == 0) {
    w.push_back(kMarker);
    i = kMarker.size();
  }
  for (; i < surface.size(); ++i) w.push_back(std::string(1, surface[i]));
  return w;
}

}  // namespace refbpe
