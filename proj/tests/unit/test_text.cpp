// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "lexpand/normalize.hpp"
#include "lexpand/random.hpp"
#include "lexpand/text.hpp"

using namespace lexpand;

TEST_SUITE("text") {
  TEST_CASE("utf8 decoding and validation") {
    const std::string alef = "\xD8\xA7";
    auto cp = text::next_code_point(alef, 0);
    CHECK(cp.valid);
    CHECK(cp.value == 0x0627);
    CHECK(cp.length == 2);
    CHECK(text::is_valid_utf8("plain ascii"));
    CHECK(text::is_valid_utf8("\xF0\x9F\x99\x82"));
    CHECK_FALSE(text::is_valid_utf8("\xC0\xAF"));      // overlong
    CHECK_FALSE(text::is_valid_utf8("\xED\xA0\x80"));  // surrogate
    CHECK_FALSE(text::is_valid_utf8("\xD8"));          // truncated
    std::string out;
    CHECK(text::sanitize_utf8("a\xFF" "b", out));
    CHECK(out == "a\xEF\xBF\xBD" "b");
  }

  TEST_CASE("word splitting uses unicode whitespace") {
    const auto words = text::split_words("  one\ttwo\xC2\xA0three\xE3\x80\x80 four\n");
    REQUIRE(words.size() == 4);
    CHECK(words[2] == "three");
    CHECK(text::count_words("") == 0);
    CHECK(text::is_blank(" \n\t\xE2\x80\x83"));
    CHECK_FALSE(text::is_blank(" x "));
  }

  TEST_CASE("folding and dedup normalization") {
    CHECK(text::fold_case("HeLLo") == "hello");
    CHECK(text::fold_case("\xEF\xBC\xA1") == "a");  // fullwidth A
    CHECK(text::fold_word("\"Hello!\"") == "hello");
    CHECK(text::fold_word("...") == "");
    CHECK(text::normalize_for_dedup("  Hello,   WORLD! ") == "hello world");
    CHECK(text::normalize_for_dedup("Hello world") == text::normalize_for_dedup("hello  world."));
  }

  TEST_CASE("lexicon matches folded forms") {
    text::Lexicon lex({"The", "في"});
    CHECK(lex.contains("the"));
    CHECK(lex.contains("THE,"));
    CHECK(lex.contains("في"));
    CHECK_FALSE(lex.contains("then"));
    CHECK_FALSE(text::Lexicon(text::default_stopwords()).empty());
  }

  TEST_CASE("rng streams are reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng c(7);
    for (int i = 0; i < 1000; ++i) {
      const auto x = c.below(10);
      CHECK(x < 10);
      const double u = c.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
    const auto idx = Rng(3).sample_indices(100, 10);
    CHECK(idx.size() == 10);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
  }
}
