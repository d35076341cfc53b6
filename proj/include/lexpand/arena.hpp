// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lexpand::arena {

enum class Verdict { a_wins, b_wins, tie, both_bad };

const char* verdict_name(Verdict v);
Verdict parse_verdict(const std::string& name);
/// a_wins <-> b_wins; tie and both_bad are symmetric.
Verdict flip(Verdict v);

struct VoteRecord {
  std::string prompt_id;
  std::string model_a;
  std::string model_b;
  std::string evaluator_id;
  Verdict verdict = Verdict::tie;

  bool operator==(const VoteRecord&) const = default;
};

struct MatchResult {
  std::string prompt_id;
  std::string model_a;  // lexicographically smaller model
  std::string model_b;
  Verdict outcome = Verdict::tie;
  std::size_t vote_count = 0;

  bool operator==(const MatchResult&) const = default;
};

/// A three-vote group with no majority; needs a fourth evaluator.
struct PendingGroup {
  std::string prompt_id;
  std::string model_a;
  std::string model_b;
  std::vector<VoteRecord> votes;  // oriented to model_a/model_b, by evaluator
};

struct Aggregated {
  std::vector<MatchResult> matches;  // sorted by prompt, then pair
  std::vector<PendingGroup> pending;
};

/// Groups votes by prompt and unordered model pair. Three votes: a verdict
/// held by at least two wins, otherwise the group is pending. Four votes:
/// a unique most frequent verdict held by at least two wins, otherwise tie.
/// Throws DataError for groups with fewer than three or more than four
/// votes, a repeated evaluator, or a model paired with itself.
Aggregated aggregate_votes(std::span<const VoteRecord> votes);

/// Decides one group's outcome with the rule above; nullopt means pending.
std::optional<Verdict> decide(std::span<const Verdict> verdicts);

struct WinRate {
  double win = 0.0;
  double loss = 0.0;
  double tie = 0.0;
  double both_bad = 0.0;
  std::size_t matches = 0;
};

/// Keyed by (model, opponent) in both orientations; `win` is the first
/// model's win fraction. Pairs without matches are absent.
using WinRateMatrix = std::map<std::pair<std::string, std::string>, WinRate>;
WinRateMatrix win_rates(std::span<const MatchResult> matches);

enum class EloConfig {
  standard,  // both_bad scores 0.5 for each side
  custom,    // both_bad scores 0 for each side
};
EloConfig parse_elo_config(const std::string& name);

struct EloOptions {
  EloConfig config = EloConfig::standard;
  double k_factor = 32.0;
  double initial = 1000.0;
  std::size_t permutations = 100;
  std::uint64_t seed = 0;
};

struct Rating {
  std::string model;
  double elo = 0.0;
  std::size_t matches = 0;

  bool operator==(const Rating&) const = default;
};

double expected_score(double rating, double opponent);

/// Scores for (model_a, model_b) under `config`.
std::pair<double, double> match_scores(Verdict outcome, EloConfig config);

/// Sequential ELO updates over one ordering of `matches`, starting every
/// model at `initial`.
std::map<std::string, double> elo_single_pass(std::span<const MatchResult> matches,
                                              std::span<const std::size_t> order,
                                              const EloOptions& options);

/// Mean rating over `permutations` shuffled orderings drawn from one stream
/// seeded with `seed`. Sorted by rating, highest first, then by name.
std::vector<Rating> elo_scores(std::span<const MatchResult> matches, const EloOptions& options);

}  // namespace lexpand::arena
