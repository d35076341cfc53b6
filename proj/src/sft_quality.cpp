// SPDX-License-Identifier: Apache-2.0
#include "lexpand/sft_quality.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "lexpand/error.hpp"
#include "lexpand/text.hpp"

namespace lexpand::sft {

const char* role_name(Role r) { return r == Role::user ? "user" : "assistant"; }

Role parse_role(const std::string& name) {
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  throw DataError("unknown role '" + name + "'");
}

bool well_formed(const std::vector<Turn>& conversation) {
  if (conversation.empty() || conversation.back().role != Role::assistant) return false;
  for (std::size_t i = 0; i < conversation.size(); ++i) {
    const Role expected = i % 2 == 0 ? Role::user : Role::assistant;
    if (conversation[i].role != expected) return false;
  }
  return true;
}

std::size_t assistant_turns(const SftSample& sample) {
  return static_cast<std::size_t>(
      std::count_if(sample.conversation.begin(), sample.conversation.end(),
                    [](const Turn& t) { return t.role == Role::assistant; }));
}

namespace {

std::string join_role(const SftSample& sample, Role role) {
  std::string out;
  bool first = true;
  for (const auto& t : sample.conversation) {
    if (t.role != role) continue;
    if (!first) out.push_back('\n');
    out += t.text;
    first = false;
  }
  return out;
}

}  // namespace

std::string prompt_text(const SftSample& sample) { return join_role(sample, Role::user); }
std::string response_text(const SftSample& sample) { return join_role(sample, Role::assistant); }

void QualityAccumulator::count(Side& side, const std::string& text, const std::string& id) {
  std::size_t content = 0;
  for (auto w : text::split_words(text)) {
    ++side.words;
    std::string folded = text::fold_word(w);
    if (folded.empty() || stopwords_->contains_folded(folded)) continue;
    ++content;
    side.unique.insert(std::move(folded));
  }
  side.content_words += content;
  if (content == 0) side.empty_ids.push_back(id);
}

void QualityAccumulator::add(const SftSample& sample) {
  ++samples_;
  count(prompt_, prompt_text(sample), sample.id);
  count(response_, response_text(sample), sample.id);
  ++turns_[assistant_turns(sample)];
}

void QualityAccumulator::merge(const QualityAccumulator& other) {
  samples_ += other.samples_;
  for (auto [mine, theirs] : {std::pair{&prompt_, &other.prompt_}, {&response_, &other.response_}}) {
    mine->words += theirs->words;
    mine->content_words += theirs->content_words;
    mine->unique.insert(theirs->unique.begin(), theirs->unique.end());
    mine->empty_ids.insert(mine->empty_ids.end(), theirs->empty_ids.begin(), theirs->empty_ids.end());
  }
  for (const auto& [turns, n] : other.turns_) turns_[turns] += n;
}

QualityReport QualityAccumulator::report() const {
  QualityReport r;
  r.sample_count = samples_;
  r.turn_histogram = turns_;
  if (samples_ > 0) {
    r.avg_prompt_words = static_cast<double>(prompt_.words) / static_cast<double>(samples_);
    r.avg_response_words = static_cast<double>(response_.words) / static_cast<double>(samples_);
  }
  auto diversity = [](const Side& s, bool& defined) {
    defined = s.content_words > 0;
    if (!defined) return 0.0;
    return 100.0 * static_cast<double>(s.unique.size()) / static_cast<double>(s.content_words);
  };
  r.lexical_diversity_prompt = diversity(prompt_, r.prompt_diversity_defined);
  r.lexical_diversity_response = diversity(response_, r.response_diversity_defined);
  auto sorted_ids = [](std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  if (!prompt_.empty_ids.empty()) r.flagged["no_content_words_prompt"] = sorted_ids(prompt_.empty_ids);
  if (!response_.empty_ids.empty()) {
    r.flagged["no_content_words_response"] = sorted_ids(response_.empty_ids);
  }
  return r;
}

QualityReport quality_metrics(std::span<const SftSample> samples, const text::Lexicon& stopwords) {
  QualityAccumulator acc(&stopwords);
  for (const auto& s : samples) acc.add(s);
  return acc.report();
}

DedupMode parse_dedup_mode(const std::string& name) {
  if (name == "normalized_exact") return DedupMode::normalized_exact;
  if (name == "ngram_jaccard") return DedupMode::ngram_jaccard;
  throw ValidationError("unknown dedup mode '" + name + "'");
}

std::string conversation_key(const std::vector<Turn>& conversation) {
  std::string key;
  for (const auto& t : conversation) {
    key += role_name(t.role);
    key.push_back('\x1F');
    key += text::normalize_for_dedup(t.text);
    key.push_back('\x1E');
  }
  return key;
}

std::set<std::string> word_trigrams(std::string_view normalized) {
  const auto words = text::split_words(normalized);
  std::set<std::string> grams;
  if (words.empty()) return grams;
  if (words.size() < 3) {
    std::string g;
    for (auto w : words) {
      if (!g.empty()) g.push_back(' ');
      g.append(w);
    }
    grams.insert(std::move(g));
    return grams;
  }
  for (std::size_t i = 0; i + 2 < words.size(); ++i) {
    std::string g(words[i]);
    g.push_back(' ');
    g.append(words[i + 1]);
    g.push_back(' ');
    g.append(words[i + 2]);
    grams.insert(std::move(g));
  }
  return grams;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

DedupResult dedup_near(std::span<const SftSample> samples, DedupMode mode,
                       double jaccard_threshold) {
  DedupResult out;
  if (mode == DedupMode::normalized_exact) {
    std::unordered_set<std::string> seen;
    for (const auto& s : samples) {
      if (seen.insert(conversation_key(s.conversation)).second) {
        out.kept.push_back(s);
      } else {
        out.dropped_ids.push_back(s.id);
      }
    }
    return out;
  }

  if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0)) {
    throw ValidationError("jaccard threshold must lie in (0, 1]");
  }
  std::vector<std::set<std::string>> kept_grams;
  for (const auto& s : samples) {
    std::string flat;
    for (const auto& t : s.conversation) {
      flat += text::normalize_for_dedup(t.text);
      flat.push_back(' ');
    }
    auto grams = word_trigrams(flat);
    const bool dup = std::any_of(kept_grams.begin(), kept_grams.end(), [&](const auto& g) {
      return jaccard(grams, g) >= jaccard_threshold;
    });
    if (dup) {
      out.dropped_ids.push_back(s.id);
    } else {
      kept_grams.push_back(std::move(grams));
      out.kept.push_back(s);
    }
  }
  return out;
}

bool has_unbalanced_markup(std::string_view s, std::size_t max_bracket_imbalance) {
  std::size_t fences = 0;
  for (std::size_t pos = s.find("```"); pos != std::string_view::npos; pos = s.find("```", pos)) {
    ++fences;
    pos += 3;
    while (pos < s.size() && s[pos] == '`') ++pos;
  }
  if (fences % 2 != 0) return true;
  long round = 0, square = 0, curly = 0;
  for (char c : s) {
    switch (c) {
      case '(': ++round; break;
      case ')': --round; break;
      case '[': ++square; break;
      case ']': --square; break;
      case '{': ++curly; break;
      case '}': --curly; break;
      default: break;
    }
  }
  const auto limit = static_cast<long>(max_bracket_imbalance);
  return std::labs(round) > limit || std::labs(square) > limit || std::labs(curly) > limit;
}

std::map<std::string, std::vector<std::string>> flag_noise(std::span<const SftSample> samples,
                                                           const NoiseRules& rules) {
  std::map<std::string, std::vector<std::string>> flagged;
  std::vector<std::size_t> response_words;
  for (const auto& s : samples) {
    bool empty = false;
    bool markup = false;
    for (const auto& t : s.conversation) {
      if (t.role != Role::assistant) continue;
      empty = empty || text::is_blank(t.text);
      markup = markup || has_unbalanced_markup(t.text, rules.max_bracket_imbalance);
    }
    if (rules.empty_response && empty) flagged[noise::empty_response].push_back(s.id);
    if (rules.role_violation && !well_formed(s.conversation)) {
      flagged[noise::role_violation].push_back(s.id);
    }
    if (rules.unbalanced_markup && markup) flagged[noise::unbalanced_markup].push_back(s.id);
    response_words.push_back(text::count_words(response_text(s)));
  }

  if (rules.length_outlier && !samples.empty()) {
    if (!(rules.length_percentile > 0.0 && rules.length_percentile <= 1.0)) {
      throw ValidationError("length percentile must lie in (0, 1]");
    }
    std::vector<std::size_t> sorted = response_words;
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(rules.length_percentile * static_cast<double>(sorted.size())));
    const std::size_t cutoff = sorted[std::max<std::size_t>(rank, 1) - 1];
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (response_words[i] > cutoff) flagged[noise::length_outlier].push_back(samples[i].id);
    }
  }
  return flagged;
}

}  // namespace lexpand::sft
