// SPDX-License-Identifier: Apache-2.0
#include "lexpand/corpus_filter.hpp"

#include <unordered_set>

#include "lexpand/error.hpp"
#include "lexpand/text.hpp"

namespace lexpand::corpus {
namespace {

void check_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("language threshold must lie in [0, 1]");
  }
}

void check_ratio(const text::Lexicon& stopwords, std::optional<double> max_ratio) {
  if (!max_ratio) return;
  if (!(*max_ratio >= 0.0 && *max_ratio <= 1.0)) {
    throw ValidationError("max stopword ratio must lie in [0, 1]");
  }
  if (stopwords.empty()) throw ValidationError("stopword ratio filter needs a non-empty stopword list");
}

// Stateful single-document checks shared by the individual filters and the
// fused pipeline, so both paths apply identical semantics.
class UrlRule {
 public:
  bool duplicate(const Document& d) {
    if (!d.url) return false;
    return !seen_.insert(*d.url).second;
  }

 private:
  std::unordered_set<std::string> seen_;
};

class TextRule {
 public:
  bool duplicate(const Document& d) { return !seen_.insert(d.text).second; }

 private:
  std::unordered_set<std::string> seen_;
};

template <typename Verdict>
Filtered run(std::span<const Document> docs, Verdict&& verdict) {
  Filtered out;
  out.report.input_count = docs.size();
  for (const Document& d : docs) {
    if (const char* dropped = verdict(d)) {
      ++out.report.dropped_by_rule[dropped];
    } else {
      out.kept.push_back(d);
    }
  }
  out.report.kept_count = out.kept.size();
  return out;
}

}  // namespace

double stopword_fraction(std::string_view text, const text::Lexicon& stopwords) {
  const auto words = text::split_words(text);
  if (words.empty()) return 0.0;
  std::size_t hits = 0;
  for (auto w : words) hits += stopwords.contains(w) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(words.size());
}

Filtered filter_language(std::span<const Document> docs, double threshold) {
  check_threshold(threshold);
  return run(docs, [&](const Document& d) -> const char* {
    return d.lang_score < threshold ? rule::language : nullptr;
  });
}

Filtered filter_short(std::span<const Document> docs, std::size_t min_words) {
  if (min_words < 1) throw ValidationError("min_words must be at least 1");
  return run(docs, [&](const Document& d) -> const char* {
    return text::count_words(d.text) < min_words ? rule::short_text : nullptr;
  });
}

Filtered filter_url_and_stopwords(std::span<const Document> docs,
                                  const text::Lexicon& stopwords,
                                  std::optional<double> max_ratio) {
  check_ratio(stopwords, max_ratio);
  UrlRule urls;
  return run(docs, [&](const Document& d) -> const char* {
    if (urls.duplicate(d)) return rule::duplicate_url;
    if (max_ratio && stopword_fraction(d.text, stopwords) > *max_ratio) return rule::stopword_ratio;
    return nullptr;
  });
}

Filtered dedup_exact(std::span<const Document> docs) {
  TextRule texts;
  return run(docs, [&](const Document& d) -> const char* {
    return texts.duplicate(d) ? rule::duplicate_text : nullptr;
  });
}

Filtered run_pipeline(std::span<const Document> docs, const PipelineOptions& options) {
  check_threshold(options.lang_threshold);
  if (options.min_words < 1) throw ValidationError("min_words must be at least 1");
  check_ratio(options.stopwords, options.max_stopword_ratio);
  UrlRule urls;
  TextRule texts;
  return run(docs, [&](const Document& d) -> const char* {
    if (d.lang_score < options.lang_threshold) return rule::language;
    if (text::count_words(d.text) < options.min_words) return rule::short_text;
    if (urls.duplicate(d)) return rule::duplicate_url;
    if (options.max_stopword_ratio &&
        stopword_fraction(d.text, options.stopwords) > *options.max_stopword_ratio) {
      return rule::stopword_ratio;
    }
    if (texts.duplicate(d)) return rule::duplicate_text;
    return nullptr;
  });
}

LanguageGuess guess_language(std::string_view s) {
  std::size_t arabic = 0;
  std::size_t latin = 0;
  for (std::size_t pos = 0; pos < s.size();) {
    const text::CodePoint cp = text::next_code_point(s, pos);
    pos += cp.length;
    if (!cp.valid) continue;
    const char32_t c = cp.value;
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) {
      ++latin;
    } else if ((c >= 0x0621 && c <= 0x064A) || (c >= 0x066E && c <= 0x06D3) ||
               (c >= 0x0750 && c <= 0x077F) || (c >= 0x08A0 && c <= 0x08FF) ||
               (c >= 0xFB50 && c <= 0xFDFF) || (c >= 0xFE70 && c <= 0xFEFF)) {
      ++arabic;
    }
  }
  const std::size_t letters = arabic + latin;
  if (letters == 0) return {"und", 0.0};
  if (arabic >= latin) return {"ar", static_cast<double>(arabic) / static_cast<double>(letters)};
  return {"en", static_cast<double>(latin) / static_cast<double>(letters)};
}

}  // namespace lexpand::corpus
