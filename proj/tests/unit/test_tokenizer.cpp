// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "lexpand/error.hpp"
#include "lexpand/random.hpp"
#include "lexpand/text.hpp"
#include "lexpand/tokenizer.hpp"
#include "reference_bpe.hpp"

using namespace lexpand;
using tok::TokenizerModel;

namespace {

TokenizerModel train(std::vector<std::string> corpus, std::size_t vocab,
                     std::vector<std::string> specials = {}) {
  tok::TrainOptions o;
  o.vocab_size = vocab;
  o.specials = std::move(specials);
  return tok::train_bpe(corpus, o);
}

std::vector<std::pair<std::string, std::string>> merge_pairs(const TokenizerModel& m) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& mg : m.merges()) out.emplace_back(mg.left, mg.right);
  return out;
}

std::string random_text(Rng& rng, std::size_t max_cps) {
  static const std::vector<char32_t> pool = {
      'a', 'b', 'c', 'x', 'Z', '0', '9', '.', ',', '!', ' ', ' ', ' ', '\t', '\n',
      0x0627, 0x0644, 0x0628, 0x062A, 0x0645, 0x064E, 0x00E9, 0x00A0, 0x3000, 0x2581,
      0x1F600, 0x1F44D, 0x4E2D, 0x2028, 0x200D};
  std::string s;
  const std::size_t n = rng.below(max_cps + 1);
  for (std::size_t i = 0; i < n; ++i) text::append_utf8(s, pool[rng.below(pool.size())]);
  return s;
}

}  // namespace

TEST_SUITE("tok_core") {
  TEST_CASE("base alphabet layout") {
    const auto m = TokenizerModel::base({"<s>", "</s>"});
    CHECK(m.size() == 2 + 256 + 1);
    CHECK(m.surface(0) == "<s>");
    CHECK(m.byte_token(0) == 2);
    CHECK(m.byte_token(255) == 257);
    CHECK(m.surface(m.marker_token()) == text::kMetaspace);
    CHECK(m.kind(0) == tok::TokenKind::special);
    CHECK(m.kind(2) == tok::TokenKind::byte);
  }

  TEST_CASE("first merge on a repeated word") {
    const auto m = train({"aa aa aa"}, 259);
    REQUIRE(m.merges().size() == 2);
    CHECK(m.merges()[0] == tok::Merge{"a", "a"});
    CHECK(m.merges()[1] == tok::Merge{std::string(text::kMetaspace), "aa"});
    CHECK(m.size() == 259);
  }

  TEST_CASE("budget equal to the base alphabet learns nothing") {
    const auto m = train({"b"}, 259, {"<s>", "</s>"});
    CHECK(m.merges().empty());
    CHECK(m.size() == 259);
    const auto roomy = train({"b"}, 300, {"<s>", "</s>"});
    REQUIRE(roomy.merges().size() == 1);
    CHECK(roomy.find(std::string(text::kMetaspace) + "b").has_value());
  }

  TEST_CASE("tie broken by concatenated surface") {
    const auto m = train({"ab ab", "ab"}, 300);
    REQUIRE_FALSE(m.merges().empty());
    CHECK(m.merges()[0] == tok::Merge{"a", "b"});
    CHECK(merge_pairs(m) == refbpe::train({"ab ab", "ab"}, 300, 0));
  }

  TEST_CASE("training preconditions") {
    CHECK_THROWS_AS(train({}, 300), ValidationError);
    CHECK_THROWS_AS(train({"abc"}, 200), ValidationError);
    CHECK_THROWS_AS(train({"abc"}, 257, {"<s>"}), ValidationError);
    CHECK_NOTHROW(train({"abc"}, 258, {"<s>"}));
    CHECK_THROWS_AS(train({""}, 300), ValidationError);
  }

  TEST_CASE("trainer agrees with the reference on small corpora") {
    Rng rng(99);
    const std::vector<std::string> alphabet = {"a", "b", "c", "d", "\xD8\xA7", "\xD9\x84", "e"};
    for (int round = 0; round < 10; ++round) {
      std::vector<std::string> corpus;
      for (int d = 0; d < 3; ++d) {
        std::string doc;
        for (int w = 0; w < 15; ++w) {
          if (!doc.empty()) doc += ' ';
          const auto len = 1 + rng.below(5);
          for (std::size_t k = 0; k < len; ++k) doc += alphabet[rng.below(alphabet.size())];
        }
        corpus.push_back(doc);
      }
      const auto m = train(corpus, 320);
      CHECK(merge_pairs(m) == refbpe::train(corpus, 320, 0));
    }
  }

  TEST_CASE("encode basics") {
    const auto m = train({"ab ab ab"}, 258);
    REQUIRE(m.merges().size() == 1);
    CHECK(m.encode("").empty());
    const auto ids = m.encode("ab");
    REQUIRE(ids.size() == 2);
    CHECK(ids[0] == m.marker_token());
    CHECK(m.surface(ids[1]) == "ab");

    const std::string emoji = "\xF0\x9F\xA6\x8A";
    const auto e = m.encode(emoji);
    REQUIRE(e.size() == 5);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(e[i + 1] == m.byte_token(static_cast<std::uint8_t>(emoji[i])));
    }
  }

  TEST_CASE("specials are atomic") {
    const auto m = train({"hello <s> world"}, 300, {"<s>", "</s>"});
    const auto ids = m.encode("<s>hi</s>");
    CHECK(ids.front() == *m.find("<s>"));
    CHECK(ids.back() == *m.find("</s>"));
    CHECK(m.encode("</s>").size() == 1);
    CHECK(m.decode(ids).text == "<s>hi</s>");
  }

  TEST_CASE("decode") {
    const auto m = TokenizerModel::base({});
    CHECK(m.decode(std::vector<tok::TokenId>{}).text.empty());
    const std::vector<tok::TokenId> alef{m.byte_token(0xD8), m.byte_token(0xA7)};
    const auto r = m.decode(alef);
    CHECK(r.text == "\xD8\xA7");
    CHECK_FALSE(r.replaced_invalid_utf8);
    const auto bad = m.decode(std::vector<tok::TokenId>{m.byte_token(0xD8)});
    CHECK(bad.replaced_invalid_utf8);
    CHECK(bad.text == "\xEF\xBF\xBD");
    CHECK_THROWS_AS(m.decode(std::vector<tok::TokenId>{static_cast<tok::TokenId>(m.size())}),
                    DataError);
  }

  TEST_CASE("round trip on random strings") {
    const auto m = train(testing_support::fixture_texts("ar_train.jsonl"), 600, {"<s>", "</s>"});
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
      const std::string s = random_text(rng, 40);
      const auto r = m.decode(m.encode(s));
      REQUIRE(r.text == s);
      CHECK_FALSE(r.replaced_invalid_utf8);
    }
    for (const std::string s : {" ", "  ", " lead", "trail ", "a  b", "\xE2\x96\x81", "\xE2\x96\x81x y",
                                "x\xE2\x96\x81", "<s>", " <s> ", "\n\n"}) {
      CHECK(m.decode(m.encode(s)).text == s);
    }
  }

  TEST_CASE("encode matches the reference merge application") {
    const auto corpus = testing_support::fixture_texts("en_train.jsonl");
    const std::vector<std::string> head(corpus.begin(), corpus.begin() + 200);
    const auto m = train(head, 700);
    const auto merges = merge_pairs(m);
    for (std::size_t d = 0; d < 20; ++d) {
      for (const auto& w : refbpe::words_of(corpus[500 + d])) {
        const auto expected = refbpe::apply(merges, w);
        std::string joined;
        for (std::size_t i = 1; i < w.size(); ++i) joined += w[i];
        const auto ids = m.encode(joined);
        std::vector<std::string> got;
        for (auto id : ids) got.push_back(m.surface(id));
        CHECK(got == expected);
      }
    }
  }

  TEST_CASE("merging tokenizers") {
    const auto original = train({"the the the"}, 300, {"<s>"});
    const auto arabic = train({"ال ال ال"}, 300, {"<s>"});
    REQUIRE(original.find(std::string(text::kMetaspace) + "the"));
    REQUIRE(arabic.find(std::string(text::kMetaspace) + "ال"));
    const auto merged = tok::merge_tokenizers(original, arabic);
    for (tok::TokenId id = 0; id < original.size(); ++id) CHECK(merged.surface(id) == original.surface(id));
    CHECK(merged.find(std::string(text::kMetaspace) + "the"));
    CHECK(merged.find(std::string(text::kMetaspace) + "ال"));
    // Base alphabet with one special is 258 tokens; every learned Arabic token is new.
    CHECK(*merged.find(arabic.surface(258)) == original.size());
    CHECK(merged.size() == original.size() + arabic.size() - 258);
    CHECK(tok::merge_tokenizers(original, original) == original);
    CHECK(merged.encode("the the") == original.encode("the the"));
    std::vector<std::string> from_merged, from_arabic;
    for (auto id : merged.encode("ال ال")) from_merged.push_back(merged.surface(id));
    for (auto id : arabic.encode("ال ال")) from_arabic.push_back(arabic.surface(id));
    CHECK(from_merged == from_arabic);
  }

  TEST_CASE("merge rejects special conflicts") {
    const auto a = train({"xy xy"}, 270, {"<s>"});
    const auto b = train({"<s>x <s>x"}, 270);
    CHECK_THROWS_AS(tok::merge_tokenizers(a, b), ValidationError);
    CHECK_THROWS_AS(tok::merge_tokenizers(b, a), ValidationError);
  }

  TEST_CASE("fertility") {
    const auto bytes_only = TokenizerModel::base({});
    const std::vector<std::string> corpus{"ab cd"};
    const auto r = tok::fertility(bytes_only, corpus, 0, 0, "tiny");
    CHECK(r.word_count == 2);
    CHECK(r.token_count == 6);
    CHECK(r.fertility == doctest::Approx(3.0));
    CHECK(r.corpus_id == "tiny");

    const std::vector<std::string> words{"alpha beta gamma", "beta alpha"};
    const auto whole = train(words, 1000);
    CHECK(tok::fertility(whole, words, 0, 0).fertility == 1.0);

    CHECK_THROWS_AS(tok::fertility(bytes_only, std::vector<std::string>{"   "}, 0, 0), DataError);
    CHECK_THROWS_AS(tok::fertility(bytes_only, std::vector<std::string>{}, 0, 0), ValidationError);

    const auto docs = testing_support::fixture_texts("en_eval.jsonl");
    const auto s1 = tok::fertility(bytes_only, docs, 50, 11);
    const auto s2 = tok::fertility(bytes_only, docs, 50, 11);
    CHECK(s1.token_count == s2.token_count);
    CHECK(s1.sample_size == 50);
    CHECK(s1.sample_seed == 11);
  }

  TEST_CASE("serialization round trip") {
    const auto m = train({"hello world \xF0\x9F\x99\x82 \\x41 tab\there"}, 320, {"<s>", "</s>"});
    const auto text = m.serialize();
    CHECK(TokenizerModel::parse(text) == m);
    CHECK(TokenizerModel::parse(text).serialize() == text);
    CHECK_THROWS_AS(TokenizerModel::parse("garbage"), DataError);
    CHECK_THROWS_AS(TokenizerModel::parse(text.substr(0, text.size() / 2)), DataError);
    const auto dir = testing_support::scratch_dir("tok");
    m.save(dir / "m.tok");
    CHECK(TokenizerModel::load(dir / "m.tok") == m);
  }

  TEST_CASE("training is deterministic and subsampling is seeded") {
    const auto corpus = testing_support::fixture_texts("en_train.jsonl");
    tok::TrainOptions o;
    o.vocab_size = 500;
    o.max_documents = 100;
    o.seed = 3;
    CHECK(tok::train_bpe(corpus, o).serialize() == tok::train_bpe(corpus, o).serialize());
  }
}
