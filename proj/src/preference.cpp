// SPDX-License-Identifier: Apache-2.0
#include "lexpand/preference.hpp"

#include <cmath>
#include <unordered_set>

#include "lexpand/error.hpp"
#include "lexpand/normalize.hpp"
#include "lexpand/text.hpp"

namespace lexpand::pref {

const char* policy_name(Policy p) { return p == Policy::on_policy ? "on_policy" : "off_policy"; }

Policy parse_policy(const std::string& name) {
  if (name == "on_policy") return Policy::on_policy;
  if (name == "off_policy") return Policy::off_policy;
  throw DataError("unknown policy '" + name + "'");
}

std::string PrefTriplet::key() const {
  return seed_id + "#" + std::to_string(provenance.candidate_index);
}

namespace {

bool prompt_well_formed(const std::vector<sft::Turn>& prompt) {
  if (prompt.empty() || prompt.back().role != sft::Role::user) return false;
  for (std::size_t i = 0; i < prompt.size(); ++i) {
    const auto expected = i % 2 == 0 ? sft::Role::user : sft::Role::assistant;
    if (prompt[i].role != expected) return false;
  }
  return true;
}

}  // namespace

void validate_seed(const PrefSeed& seed) {
  const std::string where = "seed '" + seed.id + "': ";
  if (text::is_blank(seed.id)) throw DataError("seed with a blank id");
  if (text::is_blank(seed.accepted)) throw DataError(where + "accepted response is blank");
  if (!prompt_well_formed(seed.prompt)) {
    throw DataError(where + "prompt must alternate roles from user and end on a user turn");
  }
  for (std::size_t i = 0; i < seed.candidates.size(); ++i) {
    const auto& c = seed.candidates[i];
    if (!std::isfinite(c.temperature) || c.temperature < 0.0) {
      throw DataError(where + "candidate " + std::to_string(i) + " has an invalid temperature");
    }
    if (!std::isfinite(c.top_p) || c.top_p <= 0.0 || c.top_p > 1.0) {
      throw DataError(where + "candidate " + std::to_string(i) + " has top_p outside (0, 1]");
    }
  }
}

BuildResult build_triplets(std::span<const PrefSeed> seeds, const BuildOptions& options) {
  std::unordered_set<std::string> ids;
  for (const auto& seed : seeds) {
    validate_seed(seed);
    if (!ids.insert(seed.id).second) throw DataError("duplicate seed id '" + seed.id + "'");
  }

  BuildResult out;
  for (const auto& seed : seeds) {
    const std::string accepted = text::normalize_for_dedup(seed.accepted);
    std::unordered_set<std::string> seen;
    std::size_t survivors = 0;
    for (std::size_t i = 0; i < seed.candidates.size(); ++i) {
      const Candidate& c = seed.candidates[i];
      ++out.report.input_count;
      const char* dropped = nullptr;
      if (text::is_blank(c.text)) {
        dropped = rule::empty;
      } else {
        std::string norm = text::normalize_for_dedup(c.text);
        if (norm == accepted) {
          dropped = rule::equals_accepted;
        } else if (!seen.insert(std::move(norm)).second) {
          dropped = rule::duplicate;
        } else if (sft::has_unbalanced_markup(c.text, options.max_bracket_imbalance)) {
          dropped = rule::formatting;
        }
      }
      if (dropped != nullptr) {
        ++out.report.dropped_by_rule[dropped];
        continue;
      }
      ++out.report.kept_count;
      ++survivors;
      out.triplets.push_back(
          {seed.id, seed.prompt, seed.accepted, c.text, {i, c.temperature, c.top_p, c.policy}});
    }
    if (survivors == 0) out.seeds_without_triplets.push_back(seed.id);
  }
  return out;
}

AuditReport audit_noise(std::span<const PrefTriplet> triplets, double tolerance,
                        const BuildOptions& options) {
  if (!(tolerance >= 0.0 && tolerance <= 1.0)) {
    throw ValidationError("tolerance must lie in [0, 1]");
  }
  AuditReport report;
  report.total = triplets.size();
  report.tolerance = tolerance;
  for (const auto& t : triplets) {
    std::vector<std::string> failed;
    const bool chosen_blank = text::is_blank(t.chosen);
    const bool rejected_blank = text::is_blank(t.rejected);
    if (chosen_blank) failed.emplace_back("empty_chosen");
    if (rejected_blank) failed.emplace_back("empty_rejected");
    if (!chosen_blank && !rejected_blank &&
        text::normalize_for_dedup(t.chosen) == text::normalize_for_dedup(t.rejected)) {
      failed.emplace_back("chosen_equals_rejected");
    }
    if (sft::has_unbalanced_markup(t.chosen, options.max_bracket_imbalance) ||
        sft::has_unbalanced_markup(t.rejected, options.max_bracket_imbalance)) {
      failed.emplace_back("formatting");
    }
    if (!prompt_well_formed(t.prompt)) failed.emplace_back("prompt_roles");
    if (failed.empty()) continue;
    ++report.flagged;
    auto& slot = report.offenders[t.key()];
    slot.insert(slot.end(), failed.begin(), failed.end());
  }
  report.flagged_fraction =
      report.total == 0 ? 0.0
                        : static_cast<double>(report.flagged) / static_cast<double>(report.total);
  report.passed = report.flagged_fraction <= tolerance;
  return report;
}

}  // namespace lexpand::pref
