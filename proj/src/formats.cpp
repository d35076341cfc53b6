// SPDX-License-Identifier: Apache-2.0
#include "lexpand/formats.hpp"

namespace lexpand {
namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T optional_field(const json& j, const char* key, T fallback) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

void to_json(json& j, const FilterReport& r) {
  j = json{{"input_count", r.input_count},
           {"kept_count", r.kept_count},
           {"dropped_by_rule", r.dropped_by_rule}};
}

namespace tok {
void to_json(json& j, const FertilityReport& r) {
  j = json{{"corpus_id", r.corpus_id},     {"token_count", r.token_count},
           {"word_count", r.word_count},   {"fertility", r.fertility},
           {"sample_seed", r.sample_seed}, {"sample_size", r.sample_size}};
}
}  // namespace tok

namespace corpus {

void to_json(json& j, const Document& d) {
  j = json{{"id", d.id}};
  if (d.url) j["url"] = *d.url;
  j["text"] = d.text;
  j["lang"] = d.lang;
  j["lang_score"] = d.lang_score;
  j["domain"] = d.domain;
  j["origin"] = d.origin == Origin::natural ? "natural" : "translated";
}

void from_json(const json& j, Document& d) {
  d.id = required<std::string>(j, "id");
  d.url = j.contains("url") && !j["url"].is_null()
              ? std::optional<std::string>(required<std::string>(j, "url"))
              : std::nullopt;
  d.text = required<std::string>(j, "text");
  d.lang = required<std::string>(j, "lang");
  d.lang_score = required<double>(j, "lang_score");
  if (!(d.lang_score >= 0.0 && d.lang_score <= 1.0)) {
    throw DataError("document '" + d.id + "': lang_score outside [0, 1]");
  }
  d.domain = optional_field<std::string>(j, "domain", "other");
  const auto origin = optional_field<std::string>(j, "origin", "natural");
  if (origin == "natural") {
    d.origin = Origin::natural;
  } else if (origin == "translated") {
    d.origin = Origin::translated;
  } else {
    throw DataError("document '" + d.id + "': unknown origin '" + origin + "'");
  }
}

}  // namespace corpus

namespace mixture {

void to_json(json& j, const SourceSpec& s) {
  j = json{{"name", s.name},
           {"language", s.language},
           {"origin", s.origin},
           {"domain", s.domain},
           {"available_tokens", s.available_tokens}};
}

void from_json(const json& j, SourceSpec& s) {
  s.name = required<std::string>(j, "name");
  s.language = required<std::string>(j, "language");
  s.origin = optional_field<std::string>(j, "origin", "natural");
  s.domain = optional_field<std::string>(j, "domain", "other");
  s.available_tokens = required<std::uint64_t>(j, "available_tokens");
}

void to_json(json& j, const PlanEntry& e) {
  j = json{{"source", e.source},
           {"target_tokens", e.target_tokens},
           {"weight", e.weight},
           {"epochs", e.epochs},
           {"upsampled", e.upsampled()}};
}

void from_json(const json& j, PlanEntry& e) {
  e.source = required<SourceSpec>(j, "source");
  e.target_tokens = required<std::uint64_t>(j, "target_tokens");
  e.weight = required<double>(j, "weight");
  e.epochs = required<double>(j, "epochs");
}

void to_json(json& j, const MixturePlan& p) {
  j = json{{"total_tokens", p.total_tokens},
           {"language_targets", p.language_targets},
           {"domain_targets", p.domain_targets ? json(*p.domain_targets) : json(nullptr)},
           {"entries", p.entries},
           {"realized_shares", p.realized_shares}};
}

void from_json(const json& j, MixturePlan& p) {
  p.total_tokens = required<std::uint64_t>(j, "total_tokens");
  p.language_targets = required<Targets>(j, "language_targets");
  if (j.contains("domain_targets") && !j["domain_targets"].is_null()) {
    p.domain_targets = required<Targets>(j, "domain_targets");
  } else {
    p.domain_targets.reset();
  }
  p.entries = required<std::vector<PlanEntry>>(j, "entries");
  p.realized_shares = optional_field<std::map<std::string, double>>(j, "realized_shares", {});
}

void to_json(json& j, const ManifestReport& r) {
  json rows = json::array();
  for (const auto& d : r.deviations) {
    rows.push_back({{"key", d.key},
                    {"target", d.target},
                    {"realized", d.realized},
                    {"deviation", d.deviation}});
  }
  j = json{{"deviations", rows},
           {"max_deviation", r.max_deviation},
           {"tolerance", r.tolerance},
           {"passed", r.passed}};
}

}  // namespace mixture

namespace sft {

void to_json(json& j, const Turn& t) { j = json{{"role", role_name(t.role)}, {"text", t.text}}; }

void from_json(const json& j, Turn& t) {
  t.role = parse_role(required<std::string>(j, "role"));
  t.text = required<std::string>(j, "text");
}

void to_json(json& j, const SftSample& s) {
  j = json{{"id", s.id},
           {"language", s.language},
           {"source", s.source},
           {"conversation", s.conversation}};
}

void from_json(const json& j, SftSample& s) {
  s.id = required<std::string>(j, "id");
  s.language = optional_field<std::string>(j, "language", "");
  s.source = optional_field<std::string>(j, "source", "");
  s.conversation = required<std::vector<Turn>>(j, "conversation");
}

void to_json(json& j, const QualityReport& r) {
  json hist = json::object();
  for (const auto& [turns, n] : r.turn_histogram) hist[std::to_string(turns)] = n;
  j = json{{"sample_count", r.sample_count},
           {"avg_prompt_words", r.avg_prompt_words},
           {"avg_response_words", r.avg_response_words},
           {"lexical_diversity_prompt", r.lexical_diversity_prompt},
           {"lexical_diversity_response", r.lexical_diversity_response},
           {"prompt_diversity_defined", r.prompt_diversity_defined},
           {"response_diversity_defined", r.response_diversity_defined},
           {"turn_histogram", hist},
           {"flagged", r.flagged}};
}

void to_json(json& j, const TrainingSample& s) {
  j = json{{"source_id", s.source_id},
           {"turn_index", s.turn_index},
           {"token_ids", s.token_ids},
           {"loss_mask", s.loss_mask}};
}

void to_json(json& j, const ChatTemplate& t) {
  j = json{{"bos", t.bos},
           {"eos", t.eos},
           {"role_prefixes", {{"user", t.user_prefix}, {"assistant", t.assistant_prefix}}},
           {"eos_after_intermediate", t.eos_after_intermediate},
           {"max_tokens", t.max_tokens}};
}

void from_json(const json& j, ChatTemplate& t) {
  const ChatTemplate defaults;
  t.bos = optional_field<std::string>(j, "bos", defaults.bos);
  t.eos = optional_field<std::string>(j, "eos", defaults.eos);
  const auto prefixes = optional_field<json>(j, "role_prefixes", json::object());
  t.user_prefix = optional_field<std::string>(prefixes, "user", defaults.user_prefix);
  t.assistant_prefix = optional_field<std::string>(prefixes, "assistant", defaults.assistant_prefix);
  t.eos_after_intermediate =
      optional_field<bool>(j, "eos_after_intermediate", defaults.eos_after_intermediate);
  t.max_tokens = optional_field<std::size_t>(j, "max_tokens", defaults.max_tokens);
}

}  // namespace sft

namespace pref {

void to_json(json& j, const Candidate& c) {
  j = json{{"text", c.text},
           {"temperature", c.temperature},
           {"top_p", c.top_p},
           {"policy", policy_name(c.policy)}};
}

void from_json(const json& j, Candidate& c) {
  c.text = required<std::string>(j, "text");
  c.temperature = required<double>(j, "temperature");
  c.top_p = required<double>(j, "top_p");
  c.policy = parse_policy(required<std::string>(j, "policy"));
}

void to_json(json& j, const PrefSeed& s) {
  j = json{{"id", s.id}, {"prompt", s.prompt}, {"accepted", s.accepted}, {"candidates", s.candidates}};
}

void from_json(const json& j, PrefSeed& s) {
  s.id = required<std::string>(j, "id");
  s.prompt = required<std::vector<sft::Turn>>(j, "prompt");
  s.accepted = required<std::string>(j, "accepted");
  s.candidates = required<std::vector<Candidate>>(j, "candidates");
}

void to_json(json& j, const PrefTriplet& t) {
  j = json{{"seed_id", t.seed_id},
           {"prompt", t.prompt},
           {"chosen", t.chosen},
           {"rejected", t.rejected},
           {"provenance",
            {{"candidate_index", t.provenance.candidate_index},
             {"temperature", t.provenance.temperature},
             {"top_p", t.provenance.top_p},
             {"policy", policy_name(t.provenance.policy)}}}};
}

void from_json(const json& j, PrefTriplet& t) {
  t.seed_id = required<std::string>(j, "seed_id");
  t.prompt = required<std::vector<sft::Turn>>(j, "prompt");
  t.chosen = required<std::string>(j, "chosen");
  t.rejected = required<std::string>(j, "rejected");
  const auto prov = required<json>(j, "provenance");
  t.provenance.candidate_index = required<std::size_t>(prov, "candidate_index");
  t.provenance.temperature = required<double>(prov, "temperature");
  t.provenance.top_p = required<double>(prov, "top_p");
  t.provenance.policy = parse_policy(required<std::string>(prov, "policy"));
}

void to_json(json& j, const AuditReport& r) {
  j = json{{"total", r.total},
           {"flagged", r.flagged},
           {"flagged_fraction", r.flagged_fraction},
           {"tolerance", r.tolerance},
           {"passed", r.passed},
           {"offenders", r.offenders}};
}

}  // namespace pref

namespace arena {

void to_json(json& j, const VoteRecord& v) {
  j = json{{"prompt_id", v.prompt_id},
           {"model_a", v.model_a},
           {"model_b", v.model_b},
           {"evaluator_id", v.evaluator_id},
           {"verdict", verdict_name(v.verdict)}};
}

void from_json(const json& j, VoteRecord& v) {
  v.prompt_id = required<std::string>(j, "prompt_id");
  v.model_a = required<std::string>(j, "model_a");
  v.model_b = required<std::string>(j, "model_b");
  v.evaluator_id = required<std::string>(j, "evaluator_id");
  v.verdict = parse_verdict(required<std::string>(j, "verdict"));
}

void to_json(json& j, const MatchResult& m) {
  j = json{{"prompt_id", m.prompt_id},
           {"model_a", m.model_a},
           {"model_b", m.model_b},
           {"outcome", verdict_name(m.outcome)},
           {"vote_count", m.vote_count}};
}

void from_json(const json& j, MatchResult& m) {
  m.prompt_id = required<std::string>(j, "prompt_id");
  m.model_a = required<std::string>(j, "model_a");
  m.model_b = required<std::string>(j, "model_b");
  m.outcome = parse_verdict(required<std::string>(j, "outcome"));
  m.vote_count = optional_field<std::size_t>(j, "vote_count", 0);
}

void to_json(json& j, const PendingGroup& g) {
  j = json{{"prompt_id", g.prompt_id},
           {"model_a", g.model_a},
           {"model_b", g.model_b},
           {"votes", g.votes}};
}

void to_json(json& j, const Rating& r) {
  j = json{{"model", r.model}, {"elo", r.elo}, {"matches", r.matches}};
}

json win_rates_to_json(const WinRateMatrix& m) {
  json out = json::object();
  for (const auto& [pair, w] : m) {
    out[pair.first][pair.second] = {{"win", w.win},
                                    {"loss", w.loss},
                                    {"tie", w.tie},
                                    {"both_bad", w.both_bad},
                                    {"matches", w.matches}};
  }
  return out;
}

}  // namespace arena
}  // namespace lexpand
