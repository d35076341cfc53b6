// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "lexpand/formats.hpp"
#include "lexpand/random.hpp"
#include "lexpand/sft_quality.hpp"

using namespace lexpand;
using sft::Role;
using sft::SftSample;

namespace {

SftSample sample(std::string id, std::vector<std::pair<Role, std::string>> turns) {
  SftSample s;
  s.id = std::move(id);
  for (auto& [r, t] : turns) s.conversation.push_back({r, std::move(t)});
  return s;
}

SftSample qa(std::string id, std::string q, std::string a) {
  return sample(std::move(id), {{Role::user, std::move(q)}, {Role::assistant, std::move(a)}});
}

std::vector<SftSample> clean_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SftSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string q = "question " + std::to_string(i);
    std::string a = "answer";
    const auto words = 3 + rng.below(20);
    for (std::size_t k = 0; k < words; ++k) a += " w" + std::to_string(rng.below(50));
    if (rng.below(5) == 0) a += " (see note) and `code`";
    out.push_back(qa("s" + std::to_string(i), q, a));
  }
  return out;
}

}  // namespace

TEST_SUITE("sft_quality") {
  TEST_CASE("hand-computed diversity") {
    const std::vector<SftSample> one{qa("x", "a b a", "c")};
    const auto r = sft::quality_metrics(one, text::Lexicon());
    CHECK(r.avg_prompt_words == 3.0);
    CHECK(r.lexical_diversity_prompt == doctest::Approx(200.0 / 3.0));
    CHECK(r.lexical_diversity_response == 100.0);
    CHECK(r.turn_histogram.at(1) == 1);
  }

  TEST_CASE("undefined diversity reports zero with a flag") {
    const std::vector<SftSample> s{qa("x", "the of the", "real words")};
    const auto r = sft::quality_metrics(s, text::Lexicon({"the", "of"}));
    CHECK(r.lexical_diversity_prompt == 0.0);
    CHECK_FALSE(r.prompt_diversity_defined);
    CHECK(r.response_diversity_defined);
    CHECK(r.flagged.at("no_content_words_prompt") == std::vector<std::string>{"x"});
  }

  TEST_CASE("pinned fixture values") {
    const auto samples = io::read_records<SftSample>(testing_support::fixture("sft_20.jsonl"));
    const text::Lexicon stop(text::load_word_list(testing_support::fixture("sft_stopwords.txt").string()));
    const auto r = sft::quality_metrics(samples, stop);
    CHECK(r.sample_count == 20);
    CHECK(std::abs(r.avg_prompt_words - 21.25) < 0.005);
    CHECK(std::abs(r.avg_response_words - 53.00) < 0.005);
    CHECK(std::abs(r.lexical_diversity_prompt - 25.96) < 0.005);
    CHECK(std::abs(r.lexical_diversity_response - 16.99) < 0.005);
    CHECK(r.turn_histogram == std::map<std::size_t, std::size_t>{{1, 13}, {2, 4}, {3, 2}, {4, 1}});
  }

  TEST_CASE("reference magnitude for average prompt length") {
    // 100 samples whose prompts total 6081 words.
    std::vector<SftSample> s;
    for (int i = 0; i < 100; ++i) {
      const int n = i < 81 ? 61 : 60;
      std::string q;
      for (int k = 0; k < n; ++k) q += "p" + std::to_string(k) + " ";
      s.push_back(qa(std::to_string(i), q, "ok"));
    }
    const auto r = sft::quality_metrics(s, text::Lexicon());
    CHECK(r.avg_prompt_words == doctest::Approx(60.81));
  }

  TEST_CASE("metrics are permutation invariant and mergeable") {
    auto samples = clean_corpus(60, 1);
    const text::Lexicon stop({"answer"});
    const auto base = sft::quality_metrics(samples, stop);
    Rng rng(4);
    rng.shuffle(std::span<SftSample>(samples));
    const auto shuffled = sft::quality_metrics(samples, stop);
    CHECK(base.avg_response_words == doctest::Approx(shuffled.avg_response_words));
    CHECK(base.lexical_diversity_response == doctest::Approx(shuffled.lexical_diversity_response));
    CHECK(base.turn_histogram == shuffled.turn_histogram);

    sft::QualityAccumulator left(&stop), right(&stop);
    for (std::size_t i = 0; i < samples.size(); ++i) (i < 25 ? left : right).add(samples[i]);
    left.merge(right);
    const auto merged = left.report();
    CHECK(merged.lexical_diversity_response == doctest::Approx(base.lexical_diversity_response));
    CHECK(merged.avg_prompt_words == doctest::Approx(base.avg_prompt_words));
    std::size_t total = 0;
    for (const auto& [k, v] : merged.turn_histogram) total += v;
    CHECK(total == samples.size());
  }

  TEST_CASE("normalized exact dedup") {
    const std::vector<SftSample> s{qa("a", "Hello  World", "Fine, thanks."), qa("b", "hello world", "fine thanks"),
                                   qa("c", "hello world", "fine thanks"), qa("d", "other", "fine")};
    const auto r = sft::dedup_near(s);
    CHECK(r.kept.size() == 2);
    CHECK(r.dropped_ids == std::vector<std::string>{"b", "c"});
    CHECK(sft::dedup_near(r.kept).kept == r.kept);
  }

  TEST_CASE("jaccard dedup against brute-force trigram sets") {
    const std::string base = "w1 w2 w3 w4 w5 w6 w7 w8 w9 w10";
    const std::string near = "w1 w2 w3 w4 w5 w6 w7 w8 w9 x";
    auto grams = [](const std::string& s) {
      std::vector<std::string> w;
      std::size_t p = 0;
      while (p < s.size()) {
        auto e = s.find(' ', p);
        if (e == std::string::npos) e = s.size();
        w.push_back(s.substr(p, e - p));
        p = e + 1;
      }
      std::set<std::string> g;
      for (std::size_t i = 0; i + 2 < w.size(); ++i) g.insert(w[i] + " " + w[i + 1] + " " + w[i + 2]);
      return g;
    };
    const auto ga = grams(base), gb = grams(near);
    std::size_t inter = 0;
    for (const auto& g : ga) inter += gb.count(g);
    const double j = static_cast<double>(inter) / static_cast<double>(ga.size() + gb.size() - inter);
    CHECK(j == doctest::Approx(7.0 / 9.0));

    const std::vector<SftSample> s{sample("a", {{Role::user, base}, {Role::assistant, ""}}),
                                   sample("b", {{Role::user, near}, {Role::assistant, ""}})};
    CHECK(sft::dedup_near(s, sft::DedupMode::ngram_jaccard, 0.9).kept.size() == (j >= 0.9 ? 1 : 2));
    CHECK(sft::dedup_near(s, sft::DedupMode::ngram_jaccard, 0.75).kept.size() == (j >= 0.75 ? 1 : 2));
    CHECK_THROWS_AS(sft::dedup_near(s, sft::DedupMode::ngram_jaccard, 0.0), ValidationError);
    CHECK(sft::word_trigrams("a b") == std::set<std::string>{"a b"});
  }

  TEST_CASE("normalized dedup drops only normalized duplicates") {
    Rng rng(8);
    std::vector<SftSample> s;
    const std::vector<std::string> forms{"Alpha beta", "alpha  BETA", "alpha beta!", "gamma", "Gamma.", "delta x"};
    for (int i = 0; i < 150; ++i) {
      s.push_back(qa(std::to_string(i), forms[rng.below(forms.size())], forms[rng.below(forms.size())]));
    }
    const auto r = sft::dedup_near(s);
    // Brute force: a sample is dropped iff an earlier one matches turn by turn after normalization.
    std::vector<std::string> expected;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        bool same = s[i].conversation.size() == s[j].conversation.size();
        for (std::size_t t = 0; same && t < s[i].conversation.size(); ++t) {
          same = s[i].conversation[t].role == s[j].conversation[t].role &&
                 text::normalize_for_dedup(s[i].conversation[t].text) ==
                     text::normalize_for_dedup(s[j].conversation[t].text);
        }
        if (same) {
          expected.push_back(s[i].id);
          break;
        }
      }
    }
    CHECK(r.dropped_ids == expected);
    CHECK(sft::dedup_near(r.kept).dropped_ids.empty());
  }

  TEST_CASE("noise rules") {
    const std::vector<SftSample> s{
        qa("empty", "q", ""),
        sample("userfinal", {{Role::user, "q"}, {Role::assistant, "a"}, {Role::user, "q2"}}),
        qa("fences", "q", "```x``` and ```y"),
        qa("bracket", "q", "f(x"),
        qa("fine", "q", "```ok``` (fine) [x] {y}")};
    const auto f = sft::flag_noise(s);
    CHECK(f.at("empty_response") == std::vector<std::string>{"empty"});
    CHECK(f.at("role_violation") == std::vector<std::string>{"userfinal"});
    CHECK(f.at("unbalanced_markup") == std::vector<std::string>{"fences", "bracket"});
    CHECK(f.count("length_outlier") == 0);

    sft::NoiseRules lenient;
    lenient.max_bracket_imbalance = 1;
    lenient.empty_response = false;
    const auto g = sft::flag_noise(s, lenient);
    CHECK(g.count("empty_response") == 0);
    CHECK(g.at("unbalanced_markup") == std::vector<std::string>{"fences"});
  }

  TEST_CASE("length outliers") {
    std::vector<SftSample> s;
    for (int i = 0; i < 99; ++i) s.push_back(qa(std::to_string(i), "q", "one two three"));
    std::string longer;
    for (int i = 0; i < 100; ++i) longer += "w ";
    s.push_back(qa("long", "q", longer));
    sft::NoiseRules rules;
    rules.length_outlier = true;
    const auto f = sft::flag_noise(s, rules);
    CHECK(f.at("length_outlier") == std::vector<std::string>{"long"});
  }

  TEST_CASE("injected noise is flagged exactly") {
    auto s = clean_corpus(200, 3);
    CHECK(sft::flag_noise(s).empty());
    s[37].conversation[1].text = "   ";
    s[151].conversation.pop_back();
    const auto f = sft::flag_noise(s);
    std::set<std::string> flagged;
    for (const auto& [rule, ids] : f) flagged.insert(ids.begin(), ids.end());
    CHECK(flagged == std::set<std::string>{"s37", "s151"});
  }
}
