// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fixtures.hpp"
#include "lexpand/corpus_filter.hpp"
#include "lexpand/formats.hpp"
#include "lexpand/random.hpp"

using namespace lexpand;
using corpus::Document;

namespace {

std::string words(std::size_t n, const std::string& w = "token") {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + w + std::to_string(i);
  return s;
}

Document doc(std::string id, double score, std::string text,
             std::optional<std::string> url = std::nullopt) {
  Document d;
  d.id = std::move(id);
  d.lang = "en";
  d.lang_score = score;
  d.text = std::move(text);
  d.url = std::move(url);
  return d;
}

std::vector<std::string> ids(const std::vector<Document>& docs) {
  std::vector<std::string> out;
  for (const auto& d : docs) out.push_back(d.id);
  return out;
}

}  // namespace

TEST_SUITE("corpus_filter") {
  TEST_CASE("language threshold is inclusive") {
    std::vector<Document> docs{doc("a", 0.94, "x"), doc("b", 0.95, "x"), doc("c", 1.0, "x")};
    const auto r = corpus::filter_language(docs);
    CHECK(ids(r.kept) == std::vector<std::string>{"b", "c"});
    CHECK(r.report.dropped_by_rule.at("language") == 1);
    CHECK(r.report.reconciles());

    std::vector<Document> ten;
    for (int i = 0; i < 10; ++i) ten.push_back(doc(std::to_string(i), i < 3 ? 0.5 : 0.99, "x"));
    const auto t = corpus::filter_language(ten);
    CHECK(t.report.kept_count == 7);
    CHECK(t.report.dropped_by_rule.at("language") == 3);
    CHECK_THROWS_AS(corpus::filter_language(docs, 1.5), ValidationError);
  }

  TEST_CASE("short documents") {
    std::vector<Document> docs{doc("29", 1, words(29)), doc("30", 1, words(30)), doc("0", 1, "")};
    const auto r = corpus::filter_short(docs);
    CHECK(ids(r.kept) == std::vector<std::string>{"30"});
    CHECK(r.report.dropped_by_rule.at("short") == 2);
    CHECK_THROWS_AS(corpus::filter_short(docs, 0), ValidationError);
  }

  TEST_CASE("duplicate urls and stopword ratio") {
    text::Lexicon stop({"the"});
    std::string heavy;
    for (int i = 0; i < 90; ++i) heavy += "the ";
    heavy += words(10);
    std::vector<Document> docs{doc("a", 1, words(40), "u1"), doc("b", 1, words(40, "w"), "u1"),
                               doc("c", 1, heavy, "u2"), doc("d", 1, words(40, "v")),
                               doc("e", 1, words(40, "z"))};
    const auto r = corpus::filter_url_and_stopwords(docs, stop, 0.8);
    CHECK(ids(r.kept) == std::vector<std::string>{"a", "d", "e"});
    CHECK(r.report.dropped_by_rule.at("duplicate_url") == 1);
    CHECK(r.report.dropped_by_rule.at("stopword_ratio") == 1);
    CHECK(corpus::stopword_fraction(heavy, stop) == doctest::Approx(0.9));
    CHECK(corpus::filter_url_and_stopwords(docs, stop, std::nullopt).kept.size() == 4);
    CHECK_THROWS_AS(corpus::filter_url_and_stopwords(docs, text::Lexicon(), 0.5), ValidationError);
  }

  TEST_CASE("exact dedup") {
    std::vector<Document> docs{doc("a", 1, "same text"), doc("b", 1, "same text"),
                               doc("c", 1, "same  text")};
    const auto r = corpus::dedup_exact(docs);
    CHECK(ids(r.kept) == std::vector<std::string>{"a", "c"});
    CHECK(corpus::dedup_exact(r.kept).kept == r.kept);
  }

  TEST_CASE("fused pipeline equals chained filters") {
    Rng rng(17);
    const text::Lexicon stop({"the", "a"});
    for (int round = 0; round < 30; ++round) {
      std::vector<Document> docs;
      for (int i = 0; i < 60; ++i) {
        const auto n = rng.below(50);
        std::string t;
        for (std::size_t k = 0; k < n; ++k) {
          t += k ? " " : "";
          t += rng.below(3) == 0 ? "the" : "w" + std::to_string(rng.below(4));
        }
        std::optional<std::string> url;
        if (rng.below(4) != 0) url = "u" + std::to_string(rng.below(20));
        docs.push_back(doc(std::to_string(i), 0.9 + 0.01 * static_cast<double>(rng.below(11)), t, url));
      }
      corpus::PipelineOptions opts;
      opts.min_words = 5;
      opts.max_stopword_ratio = 0.4;
      opts.stopwords = stop;
      const auto fused = corpus::run_pipeline(docs, opts);
      auto s1 = corpus::filter_language(docs, opts.lang_threshold);
      auto s2 = corpus::filter_short(s1.kept, opts.min_words);
      auto s3 = corpus::filter_url_and_stopwords(s2.kept, stop, opts.max_stopword_ratio);
      auto s4 = corpus::dedup_exact(s3.kept);
      CHECK(fused.kept == s4.kept);
      FilterReport chained;
      chained.input_count = docs.size();
      for (const auto* r : {&s1.report, &s2.report, &s3.report, &s4.report}) {
        for (const auto& [k, v] : r->dropped_by_rule) chained.dropped_by_rule[k] += v;
      }
      CHECK(fused.report.dropped_by_rule == chained.dropped_by_rule);
      CHECK(fused.report.reconciles());
    }
  }

  TEST_CASE("planted fixture") {
    const auto docs = io::read_records<Document>(testing_support::fixture("filter_corpus.jsonl"));
    const auto planted = io::read_json_file<nlohmann::json>(
        testing_support::fixture("filter_planted.json"));
    const auto r = corpus::run_pipeline(docs, corpus::PipelineOptions{});
    std::vector<std::string> expected;
    std::map<std::string, std::size_t> counts;
    for (const auto& d : docs) {
      const auto& rule = planted.at(d.id);
      if (!rule.is_null()) {
        ++counts[rule.get<std::string>()];
      } else {
        expected.push_back(d.id);
      }
    }
    CHECK(ids(r.kept) == expected);
    CHECK(r.report.dropped_by_rule == counts);
  }

  TEST_CASE("language guess") {
    CHECK(corpus::guess_language("hello world").lang == "en");
    CHECK(corpus::guess_language("مرحبا بالعالم").lang == "ar");
    CHECK(corpus::guess_language("مرحبا").score == 1.0);
    CHECK(corpus::guess_language("123 !").lang == "und");
  }
}
