// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexpand/normalize.hpp"
#include "lexpand/report.hpp"

namespace lexpand::corpus {

enum class Origin { natural, translated };

/// Pretraining text unit. `lang_score` comes from an upstream language
/// identifier; `guess_language` is only a fixture-grade stand-in.
struct Document {
  std::string id;
  std::optional<std::string> url;
  std::string text;
  std::string lang;
  double lang_score = 0.0;
  std::string domain = "other";
  Origin origin = Origin::natural;

  bool operator==(const Document&) const = default;
};

struct Filtered {
  std::vector<Document> kept;
  FilterReport report;
};

namespace rule {
inline constexpr const char* language = "language";
inline constexpr const char* short_text = "short";
inline constexpr const char* duplicate_url = "duplicate_url";
inline constexpr const char* stopword_ratio = "stopword_ratio";
inline constexpr const char* duplicate_text = "duplicate_text";
}  // namespace rule

/// Keeps documents with lang_score >= threshold.
Filtered filter_language(std::span<const Document> docs, double threshold = 0.95);

/// Keeps documents with at least `min_words` whitespace-delimited words.
Filtered filter_short(std::span<const Document> docs, std::size_t min_words = 30);

/// Drops later documents repeating an earlier URL, then documents whose
/// stopword fraction exceeds `max_ratio`. Documents without a URL skip the
/// URL rule. A ratio of std::nullopt disables the stopword rule.
Filtered filter_url_and_stopwords(std::span<const Document> docs,
                                  const text::Lexicon& stopwords,
                                  std::optional<double> max_ratio);

/// Keeps the first document for each exact text byte sequence.
Filtered dedup_exact(std::span<const Document> docs);

struct PipelineOptions {
  double lang_threshold = 0.95;
  std::size_t min_words = 30;
  std::optional<double> max_stopword_ratio = 0.7;
  text::Lexicon stopwords{text::default_stopwords()};
};

/// All four rules in one pass, in listed order. Equivalent to chaining the
/// individual filters.
Filtered run_pipeline(std::span<const Document> docs, const PipelineOptions& options);

double stopword_fraction(std::string_view text, const text::Lexicon& stopwords);

struct LanguageGuess {
  std::string lang;  // "ar", "en" or "und"
  double score = 0.0;
};

/// Arabic-script letters versus Basic Latin letters.
LanguageGuess guess_language(std::string_view text);

}  // namespace lexpand::corpus
