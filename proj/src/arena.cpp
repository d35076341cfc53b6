// SPDX-License-Identifier: Apache-2.0
#include "lexpand/arena.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "lexpand/error.hpp"
#include "lexpand/random.hpp"

namespace lexpand::arena {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::a_wins: return "a_wins";
    case Verdict::b_wins: return "b_wins";
    case Verdict::tie: return "tie";
    case Verdict::both_bad: return "both_bad";
  }
  return "tie";
}

Verdict parse_verdict(const std::string& name) {
  if (name == "a_wins") return Verdict::a_wins;
  if (name == "b_wins") return Verdict::b_wins;
  if (name == "tie") return Verdict::tie;
  if (name == "both_bad") return Verdict::both_bad;
  throw DataError("unknown verdict '" + name + "'");
}

Verdict flip(Verdict v) {
  if (v == Verdict::a_wins) return Verdict::b_wins;
  if (v == Verdict::b_wins) return Verdict::a_wins;
  return v;
}

EloConfig parse_elo_config(const std::string& name) {
  if (name == "default") return EloConfig::standard;
  if (name == "custom") return EloConfig::custom;
  throw ValidationError("unknown ELO config '" + name + "' (expected default or custom)");
}

std::optional<Verdict> decide(std::span<const Verdict> verdicts) {
  if (verdicts.size() < 3 || verdicts.size() > 4) {
    throw DataError("a vote group needs 3 or 4 votes, got " + std::to_string(verdicts.size()));
  }
  std::array<std::size_t, 4> counts{};
  for (Verdict v : verdicts) ++counts[static_cast<std::size_t>(v)];
  const auto top = std::max_element(counts.begin(), counts.end());
  const bool unique = std::count(counts.begin(), counts.end(), *top) == 1;
  if (*top >= 2 && unique) return static_cast<Verdict>(top - counts.begin());
  if (verdicts.size() == 3) return std::nullopt;
  return Verdict::tie;
}

Aggregated aggregate_votes(std::span<const VoteRecord> votes) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::vector<VoteRecord>> groups;
  for (const auto& v : votes) {
    if (v.model_a == v.model_b) {
      throw DataError("prompt '" + v.prompt_id + "': model '" + v.model_a + "' paired with itself");
    }
    VoteRecord oriented = v;
    if (oriented.model_b < oriented.model_a) {
      std::swap(oriented.model_a, oriented.model_b);
      oriented.verdict = flip(oriented.verdict);
    }
    groups[{oriented.prompt_id, oriented.model_a, oriented.model_b}].push_back(std::move(oriented));
  }

  Aggregated out;
  for (auto& [key, group] : groups) {
    const auto& [prompt, a, b] = key;
    const std::string label = "(" + prompt + ", " + a + ", " + b + ")";
    std::sort(group.begin(), group.end(), [](const VoteRecord& x, const VoteRecord& y) {
      return x.evaluator_id < y.evaluator_id;
    });
    for (std::size_t i = 1; i < group.size(); ++i) {
      if (group[i].evaluator_id == group[i - 1].evaluator_id) {
        throw DataError("group " + label + ": evaluator '" + group[i].evaluator_id +
                        "' voted twice");
      }
    }
    if (group.size() < 3 || group.size() > 4) {
      throw DataError("group " + label + " has " + std::to_string(group.size()) +
                      " votes; 3 or 4 are required");
    }
    std::vector<Verdict> verdicts;
    for (const auto& v : group) verdicts.push_back(v.verdict);
    if (auto outcome = decide(verdicts)) {
      out.matches.push_back({prompt, a, b, *outcome, group.size()});
    } else {
      out.pending.push_back({prompt, a, b, std::move(group)});
    }
  }
  return out;
}

WinRateMatrix win_rates(std::span<const MatchResult> matches) {
  struct Counts {
    std::size_t win = 0, loss = 0, tie = 0, both_bad = 0;
  };
  std::map<std::pair<std::string, std::string>, Counts> counts;
  for (const auto& m : matches) {
    auto& fwd = counts[{m.model_a, m.model_b}];
    auto& rev = counts[{m.model_b, m.model_a}];
    switch (m.outcome) {
      case Verdict::a_wins: ++fwd.win; ++rev.loss; break;
      case Verdict::b_wins: ++fwd.loss; ++rev.win; break;
      case Verdict::tie: ++fwd.tie; ++rev.tie; break;
      case Verdict::both_bad: ++fwd.both_bad; ++rev.both_bad; break;
    }
  }
  WinRateMatrix out;
  for (const auto& [pair, c] : counts) {
    const std::size_t n = c.win + c.loss + c.tie + c.both_bad;
    const double d = static_cast<double>(n);
    out[pair] = {static_cast<double>(c.win) / d, static_cast<double>(c.loss) / d,
                 static_cast<double>(c.tie) / d, static_cast<double>(c.both_bad) / d, n};
  }
  return out;
}

double expected_score(double rating, double opponent) {
  return 1.0 / (1.0 + std::pow(10.0, (opponent - rating) / 400.0));
}

std::pair<double, double> match_scores(Verdict outcome, EloConfig config) {
  switch (outcome) {
    case Verdict::a_wins: return {1.0, 0.0};
    case Verdict::b_wins: return {0.0, 1.0};
    case Verdict::tie: return {0.5, 0.5};
    case Verdict::both_bad:
      return config == EloConfig::standard ? std::pair{0.5, 0.5} : std::pair{0.0, 0.0};
  }
  throw DataError("unknown match outcome");
}

namespace {

void check_options(const EloOptions& options) {
  if (!(options.k_factor > 0.0) || !std::isfinite(options.k_factor)) {
    throw ValidationError("k factor must be positive");
  }
  if (!std::isfinite(options.initial)) throw ValidationError("initial rating must be finite");
  if (options.permutations == 0) throw ValidationError("permutations must be at least 1");
}

// Ratings indexed by model position in `models`; matches given as index pairs.
struct Indexed {
  std::vector<std::string> models;
  std::vector<std::size_t> a, b;
  std::vector<std::size_t> games;
};

Indexed index_matches(std::span<const MatchResult> matches) {
  Indexed ix;
  std::set<std::string> names;
  for (const auto& m : matches) {
    if (m.model_a == m.model_b) {
      throw DataError("prompt '" + m.prompt_id + "': model '" + m.model_a + "' paired with itself");
    }
    names.insert(m.model_a);
    names.insert(m.model_b);
  }
  ix.models.assign(names.begin(), names.end());
  ix.games.assign(ix.models.size(), 0);
  auto pos = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::lower_bound(ix.models.begin(), ix.models.end(), name) - ix.models.begin());
  };
  for (const auto& m : matches) {
    ix.a.push_back(pos(m.model_a));
    ix.b.push_back(pos(m.model_b));
    ++ix.games[ix.a.back()];
    ++ix.games[ix.b.back()];
  }
  return ix;
}

void play(const Indexed& ix, std::span<const MatchResult> matches,
          std::span<const std::size_t> order, const EloOptions& options,
          std::vector<double>& ratings) {
  ratings.assign(ix.models.size(), options.initial);
  for (std::size_t i : order) {
    if (i >= matches.size()) throw ValidationError("match order index out of range");
    double& ra = ratings[ix.a[i]];
    double& rb = ratings[ix.b[i]];
    const double ea = expected_score(ra, rb);
    const double eb = 1.0 - ea;
    const auto [sa, sb] = match_scores(matches[i].outcome, options.config);
    ra += options.k_factor * (sa - ea);
    rb += options.k_factor * (sb - eb);
  }
}

}  // namespace

std::map<std::string, double> elo_single_pass(std::span<const MatchResult> matches,
                                              std::span<const std::size_t> order,
                                              const EloOptions& options) {
  check_options(options);
  const Indexed ix = index_matches(matches);
  std::vector<double> ratings;
  play(ix, matches, order, options, ratings);
  std::map<std::string, double> out;
  for (std::size_t m = 0; m < ix.models.size(); ++m) out[ix.models[m]] = ratings[m];
  return out;
}

std::vector<Rating> elo_scores(std::span<const MatchResult> matches, const EloOptions& options) {
  check_options(options);
  const Indexed ix = index_matches(matches);
  Rng rng(options.seed);
  std::vector<double> sum(ix.models.size(), 0.0);
  std::vector<double> ratings;
  std::vector<std::size_t> order(matches.size());
  for (std::size_t p = 0; p < options.permutations; ++p) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    play(ix, matches, order, options, ratings);
    for (std::size_t m = 0; m < ratings.size(); ++m) sum[m] += ratings[m];
  }
  std::vector<Rating> out;
  for (std::size_t m = 0; m < ix.models.size(); ++m) {
    out.push_back({ix.models[m], sum[m] / static_cast<double>(options.permutations), ix.games[m]});
  }
  std::sort(out.begin(), out.end(), [](const Rating& x, const Rating& y) {
    if (x.elo != y.elo) return x.elo > y.elo;
    return x.model < y.model;
  });
  return out;
}

}  // namespace lexpand::arena
