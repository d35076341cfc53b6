// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lexpand/report.hpp"
#include "lexpand/sft_quality.hpp"

namespace lexpand::pref {

enum class Policy { on_policy, off_policy };

const char* policy_name(Policy p);
Policy parse_policy(const std::string& name);

struct Candidate {
  std::string text;
  double temperature = 1.0;
  double top_p = 1.0;
  Policy policy = Policy::on_policy;

  bool operator==(const Candidate&) const = default;
};

struct PrefSeed {
  std::string id;
  std::vector<sft::Turn> prompt;  // conversation prefix ending on a user turn
  std::string accepted;
  std::vector<Candidate> candidates;
};

struct Provenance {
  std::size_t candidate_index = 0;
  double temperature = 1.0;
  double top_p = 1.0;
  Policy policy = Policy::on_policy;

  bool operator==(const Provenance&) const = default;
};

struct PrefTriplet {
  std::string seed_id;
  std::vector<sft::Turn> prompt;
  std::string chosen;
  std::string rejected;
  Provenance provenance;

  /// "<seed_id>#<candidate_index>"
  std::string key() const;
  bool operator==(const PrefTriplet&) const = default;
};

namespace rule {
inline constexpr const char* empty = "empty";
inline constexpr const char* equals_accepted = "equals_accepted";
inline constexpr const char* duplicate = "duplicate";
inline constexpr const char* formatting = "formatting";
}  // namespace rule

struct BuildOptions {
  std::size_t max_bracket_imbalance = 0;
};

struct BuildResult {
  std::vector<PrefTriplet> triplets;
  FilterReport report;  // counts candidates
  std::vector<std::string> seeds_without_triplets;
};

/// Throws DataError when a seed breaks the schema: blank id or accepted
/// text, repeated id, prompt not ending on a user turn, or sampling
/// parameters out of range.
void validate_seed(const PrefSeed& seed);

/// Candidate filters run in order: empty, equal to the accepted text after
/// normalization, normalized duplicate of an earlier candidate of the same
/// seed, unbalanced markup. Each survivor becomes one triplet with the
/// accepted text as `chosen`.
BuildResult build_triplets(std::span<const PrefSeed> seeds, const BuildOptions& options = {});

struct AuditReport {
  std::size_t total = 0;
  std::size_t flagged = 0;
  double flagged_fraction = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  /// Triplet key -> failed checks.
  std::map<std::string, std::vector<std::string>> offenders;
};

/// Re-checks built triplets: non-blank chosen and rejected, chosen differs
/// from rejected after normalization, balanced markup, and a prompt that
/// alternates roles from user and ends on a user turn. Fails when the
/// flagged fraction exceeds `tolerance`.
AuditReport audit_noise(std::span<const PrefTriplet> triplets, double tolerance = 0.001,
                        const BuildOptions& options = {});

}  // namespace lexpand::pref
