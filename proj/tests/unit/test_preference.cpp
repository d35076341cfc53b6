// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "lexpand/formats.hpp"
#include "lexpand/preference.hpp"

using namespace lexpand;
using pref::Candidate;
using pref::PrefSeed;

namespace {

PrefSeed seed(std::string id, std::string accepted, std::vector<std::string> texts) {
  PrefSeed s;
  s.id = std::move(id);
  s.prompt = {{sft::Role::user, "prompt for " + s.id}};
  s.accepted = std::move(accepted);
  for (auto& t : texts) s.candidates.push_back({std::move(t), 0.7, 0.9, pref::Policy::on_policy});
  return s;
}

}  // namespace

TEST_SUITE("pref_build") {
  TEST_CASE("filters in order") {
    std::vector<PrefSeed> seeds{seed("s1", "The answer.", {"", "the answer", "other one", "Other one!",
                                                           "broken ```", "fine reply"})};
    const auto r = pref::build_triplets(seeds);
    REQUIRE(r.triplets.size() == 2);
    CHECK(r.triplets[0].rejected == "other one");
    CHECK(r.triplets[1].rejected == "fine reply");
    CHECK(r.triplets[1].provenance.candidate_index == 5);
    CHECK(r.triplets[0].chosen == "The answer.");
    CHECK(r.report.dropped_by_rule.at("empty") == 1);
    CHECK(r.report.dropped_by_rule.at("equals_accepted") == 1);
    CHECK(r.report.dropped_by_rule.at("duplicate") == 1);
    CHECK(r.report.dropped_by_rule.at("formatting") == 1);
    CHECK(r.report.reconciles());
  }

  TEST_CASE("ten identical candidates give one triplet") {
    std::vector<PrefSeed> seeds{seed("s", "yes", std::vector<std::string>(10, "no way"))};
    CHECK(pref::build_triplets(seeds).triplets.size() == 1);
  }

  TEST_CASE("seeds without survivors are reported") {
    std::vector<PrefSeed> seeds{seed("dead", "same", {"", "SAME"}), seed("alive", "a", {"b"})};
    const auto r = pref::build_triplets(seeds);
    CHECK(r.seeds_without_triplets == std::vector<std::string>{"dead"});
    CHECK(r.triplets.size() == 1);
  }

  TEST_CASE("schema errors") {
    auto bad = seed("x", "", {"a"});
    CHECK_THROWS_AS(pref::build_triplets(std::vector<PrefSeed>{bad}), DataError);
    auto top = seed("x", "ok", {"a"});
    top.candidates[0].top_p = 1.5;
    CHECK_THROWS_AS(pref::build_triplets(std::vector<PrefSeed>{top}), DataError);
    auto roles = seed("x", "ok", {"a"});
    roles.prompt.push_back({sft::Role::assistant, "hi"});
    CHECK_THROWS_AS(pref::build_triplets(std::vector<PrefSeed>{roles}), DataError);
    CHECK_THROWS_AS(pref::build_triplets(std::vector<PrefSeed>{seed("d", "a", {"b"}), seed("d", "a", {"c"})}),
                    DataError);
  }

  TEST_CASE("invariants on the fixture") {
    const auto seeds = io::read_records<PrefSeed>(testing_support::fixture("pref_seeds.jsonl"));
    const auto r = pref::build_triplets(seeds);
    std::size_t total = 0;
    for (const auto& s : seeds) total += s.candidates.size();
    CHECK(r.triplets.size() <= total);
    CHECK(r.report.input_count == total);
    CHECK(r.report.reconciles());
    std::map<std::string, const PrefSeed*> by_id;
    for (const auto& s : seeds) by_id[s.id] = &s;
    for (const auto& t : r.triplets) {
      const auto& cands = by_id.at(t.seed_id)->candidates;
      CHECK(cands.at(t.provenance.candidate_index).text == t.rejected);
      CHECK(text::normalize_for_dedup(t.chosen) != text::normalize_for_dedup(t.rejected));
    }
    CHECK(io::records_to_jsonl(r.triplets) == io::records_to_jsonl(pref::build_triplets(seeds).triplets));
    const auto audit = pref::audit_noise(r.triplets);
    CHECK(audit.passed);
    CHECK(audit.flagged == 0);
  }

  TEST_CASE("audit tolerance") {
    std::vector<PrefSeed> seeds;
    for (int i = 0; i < 500; ++i) seeds.push_back(seed("s" + std::to_string(i), "good", {"bad " + std::to_string(i)}));
    auto triplets = pref::build_triplets(seeds).triplets;
    REQUIRE(triplets.size() == 500);
    triplets[123].rejected = "";
    const auto strict = pref::audit_noise(triplets, 0.001);
    CHECK_FALSE(strict.passed);
    CHECK(strict.flagged == 1);
    CHECK(strict.offenders.count("s123#0") == 1);
    CHECK(pref::audit_noise(triplets, 0.01).passed);

    triplets[123].rejected = "GOOD";
    CHECK(pref::audit_noise(triplets, 0.001).offenders.at("s123#0") ==
          std::vector<std::string>{"chosen_equals_rejected"});
    triplets[123].rejected = "ok";
    triplets[123].prompt.clear();
    CHECK(pref::audit_noise(triplets, 0.001).offenders.at("s123#0") ==
          std::vector<std::string>{"prompt_roles"});
  }
}
