// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lexpand::mixture {

struct SourceSpec {
  std::string name;
  std::string language;            // e.g. "ar", "en"
  std::string origin = "natural";  // "natural" or "translated"
  std::string domain = "other";
  std::uint64_t available_tokens = 0;

  bool operator==(const SourceSpec&) const = default;
};

struct PlanEntry {
  SourceSpec source;
  std::uint64_t target_tokens = 0;
  double weight = 0.0;
  double epochs = 0.0;

  bool upsampled() const { return epochs > 1.0; }
};

/// Keys of `realized_shares`: "language:<l>", "domain:<d>",
/// "language_origin:<l>/<o>". Values are fractions of total_tokens.
struct MixturePlan {
  std::uint64_t total_tokens = 0;
  std::map<std::string, double> language_targets;
  std::optional<std::map<std::string, double>> domain_targets;
  std::vector<PlanEntry> entries;  // sorted by source name
  std::map<std::string, double> realized_shares;

  const PlanEntry& entry(const std::string& name) const;
};

using Targets = std::map<std::string, double>;

/// Language targets are met exactly. Inside a language, domain targets
/// (renormalized over the domains that language has) split its weight;
/// without domain targets, or inside a domain, sources share in proportion
/// to available tokens. Integer rounding residue goes to the largest-weight
/// entry so the targets sum to total_tokens.
MixturePlan plan_mixture(std::span<const SourceSpec> sources, const Targets& language_targets,
                         const std::optional<Targets>& domain_targets, std::uint64_t total_tokens);

struct LanguageRatio {
  double arabic = 0.0;
  double english = 0.0;
};

/// One plan per ratio, in input order.
std::vector<MixturePlan> plan_grid(std::span<const SourceSpec> sources,
                                   std::span<const LanguageRatio> ratios,
                                   std::uint64_t total_tokens,
                                   const std::string& arabic_code = "ar",
                                   const std::string& english_code = "en");

struct ShareDeviation {
  std::string key;
  double target = 0.0;
  double realized = 0.0;
  double deviation = 0.0;
};

struct ManifestReport {
  std::vector<ShareDeviation> deviations;  // languages then domains, key order
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Compares sampled token counts against the plan's language and domain
/// shares. Every plan source must appear in `sampled_counts`; unknown
/// sources are an error.
ManifestReport verify_manifest(const MixturePlan& plan,
                               const std::map<std::string, std::uint64_t>& sampled_counts,
                               double tolerance);

}  // namespace lexpand::mixture
