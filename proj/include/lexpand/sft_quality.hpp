// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "lexpand/normalize.hpp"

namespace lexpand::sft {

enum class Role { user, assistant };

const char* role_name(Role r);
Role parse_role(const std::string& name);

struct Turn {
  Role role = Role::user;
  std::string text;

  bool operator==(const Turn&) const = default;
};

struct SftSample {
  std::string id;
  std::vector<Turn> conversation;
  std::string language;
  std::string source;

  bool operator==(const SftSample&) const = default;
};

/// Roles alternate starting with the user, and the conversation ends on an
/// assistant turn.
bool well_formed(const std::vector<Turn>& conversation);
std::size_t assistant_turns(const SftSample& sample);

/// User turns joined by newlines; likewise for assistant turns.
std::string prompt_text(const SftSample& sample);
std::string response_text(const SftSample& sample);

struct QualityReport {
  std::size_t sample_count = 0;
  double avg_prompt_words = 0.0;
  double avg_response_words = 0.0;
  double lexical_diversity_prompt = 0.0;    // percent
  double lexical_diversity_response = 0.0;  // percent
  bool prompt_diversity_defined = false;
  bool response_diversity_defined = false;
  /// Assistant-turn count -> number of samples.
  std::map<std::size_t, std::size_t> turn_histogram;
  /// Rule -> sample ids. Rules: "no_content_words_prompt",
  /// "no_content_words_response".
  std::map<std::string, std::vector<std::string>> flagged;
};

/// Mergeable partial counts behind QualityReport. Lexical diversity is
/// 100 * |unique non-stopwords| / |non-stopwords| over the whole corpus.
/// Words are folded (NFKC casefold, edge punctuation trimmed) first.
class QualityAccumulator {
 public:
  explicit QualityAccumulator(const text::Lexicon* stopwords) : stopwords_(stopwords) {}

  void add(const SftSample& sample);
  void merge(const QualityAccumulator& other);
  QualityReport report() const;

 private:
  struct Side {
    std::size_t words = 0;
    std::size_t content_words = 0;
    std::unordered_set<std::string> unique;
    std::vector<std::string> empty_ids;
  };
  void count(Side& side, const std::string& text, const std::string& id);

  const text::Lexicon* stopwords_;
  std::size_t samples_ = 0;
  Side prompt_;
  Side response_;
  std::map<std::size_t, std::size_t> turns_;
};

QualityReport quality_metrics(std::span<const SftSample> samples, const text::Lexicon& stopwords);

enum class DedupMode { normalized_exact, ngram_jaccard };
DedupMode parse_dedup_mode(const std::string& name);

struct DedupResult {
  std::vector<SftSample> kept;
  std::vector<std::string> dropped_ids;
};

/// First occurrence wins. normalized_exact compares normalize_for_dedup of
/// the whole conversation; ngram_jaccard drops a sample whose word-trigram
/// set has Jaccard >= threshold with any earlier kept sample.
DedupResult dedup_near(std::span<const SftSample> samples,
                       DedupMode mode = DedupMode::normalized_exact,
                       double jaccard_threshold = 0.9);

/// Conversation key used by normalized_exact.
std::string conversation_key(const std::vector<Turn>& conversation);

/// Distinct word trigrams of normalized text; texts shorter than three
/// words yield one gram holding all of their words.
std::set<std::string> word_trigrams(std::string_view normalized);
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

namespace noise {
inline constexpr const char* empty_response = "empty_response";
inline constexpr const char* role_violation = "role_violation";
inline constexpr const char* unbalanced_markup = "unbalanced_markup";
inline constexpr const char* length_outlier = "length_outlier";
}  // namespace noise

struct NoiseRules {
  bool empty_response = true;
  bool role_violation = true;
  bool unbalanced_markup = true;
  bool length_outlier = false;
  /// Largest tolerated |open - close| per bracket kind: (), [], {}.
  std::size_t max_bracket_imbalance = 0;
  /// Response word counts strictly above this nearest-rank percentile are outliers.
  double length_percentile = 0.99;
};

/// Odd number of ``` fences, or a bracket imbalance above the limit.
bool has_unbalanced_markup(std::string_view text, std::size_t max_bracket_imbalance);

/// Rule -> sample ids (input order). Rules with no hits are omitted.
std::map<std::string, std::vector<std::string>> flag_noise(std::span<const SftSample> samples,
                                                           const NoiseRules& rules = {});

}  // namespace lexpand::sft
