// SPDX-License-Identifier: Apache-2.0
#include "lexpand/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lexpand/error.hpp"

namespace lexpand::mixture {
namespace {

constexpr double kSumTolerance = 1e-9;

void check_targets(const Targets& targets, const char* what) {
  double sum = 0.0;
  for (const auto& [key, value] : targets) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ValidationError(std::string(what) + " target '" + key + "' must be a non-negative number");
    }
    sum += value;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError(std::string(what) + " targets sum to " + std::to_string(sum) +
                          ", expected 1");
  }
}

std::string language_key(const std::string& l) { return "language:" + l; }
std::string domain_key(const std::string& d) { return "domain:" + d; }

}  // namespace

const PlanEntry& MixturePlan::entry(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.source.name == name) return e;
  }
  throw ValidationError("plan has no source named '" + name + "'");
}

MixturePlan plan_mixture(std::span<const SourceSpec> sources, const Targets& language_targets,
                         const std::optional<Targets>& domain_targets,
                         std::uint64_t total_tokens) {
  if (total_tokens == 0) throw ValidationError("total_tokens must be positive");
  if (sources.empty()) throw ValidationError("no sources given");
  check_targets(language_targets, "language");
  if (domain_targets) check_targets(*domain_targets, "domain");

  std::vector<SourceSpec> sorted(sources.begin(), sources.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const SourceSpec& a, const SourceSpec& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].available_tokens == 0) {
      throw ValidationError("source '" + sorted[i].name + "' has no available tokens");
    }
    if (i > 0 && sorted[i].name == sorted[i - 1].name) {
      throw ValidationError("duplicate source name '" + sorted[i].name + "'");
    }
  }

  // Availability totals per language and per (language, domain).
  std::map<std::string, long double> lang_avail;
  std::map<std::pair<std::string, std::string>, long double> lang_domain_avail;
  std::set<std::string> all_domains;
  for (const auto& s : sorted) {
    lang_avail[s.language] += static_cast<long double>(s.available_tokens);
    lang_domain_avail[{s.language, s.domain}] += static_cast<long double>(s.available_tokens);
    all_domains.insert(s.domain);
  }
  for (const auto& [lang, target] : language_targets) {
    if (target > 0.0 && lang_avail.count(lang) == 0) {
      throw ValidationError("infeasible target: language '" + lang + "' has no source");
    }
  }
  // Renormalized domain targets per language.
  std::map<std::string, long double> domain_mass;
  if (domain_targets) {
    for (const auto& [domain, target] : *domain_targets) {
      if (target > 0.0 && all_domains.count(domain) == 0) {
        throw ValidationError("infeasible target: domain '" + domain + "' has no source");
      }
    }
    for (const auto& [key, avail] : lang_domain_avail) {
      auto it = domain_targets->find(key.second);
      if (it != domain_targets->end()) domain_mass[key.first] += it->second;
    }
    for (const auto& [lang, target] : language_targets) {
      if (target > 0.0 && domain_mass[lang] <= 0.0L) {
        throw ValidationError("infeasible target: language '" + lang +
                              "' has no source in a targeted domain");
      }
    }
  }

  MixturePlan plan;
  plan.total_tokens = total_tokens;
  plan.language_targets = language_targets;
  plan.domain_targets = domain_targets;
  std::vector<long double> exact(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& s = sorted[i];
    auto lt = language_targets.find(s.language);
    long double w = lt == language_targets.end() ? 0.0L : static_cast<long double>(lt->second);
    const long double avail = static_cast<long double>(s.available_tokens);
    if (w > 0.0L) {
      if (domain_targets) {
        auto dt = domain_targets->find(s.domain);
        const long double d = dt == domain_targets->end() ? 0.0L : dt->second;
        w *= d / domain_mass[s.language];
        w *= avail / lang_domain_avail[{s.language, s.domain}];
      } else {
        w *= avail / lang_avail[s.language];
      }
    }
    exact[i] = w;
    PlanEntry e;
    e.source = s;
    e.weight = static_cast<double>(w);
    plan.entries.push_back(std::move(e));
  }

  // Integer token targets; residue to the largest weight (first by name on ties).
  std::uint64_t assigned = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const long double t = std::round(exact[i] * static_cast<long double>(total_tokens));
    plan.entries[i].target_tokens = static_cast<std::uint64_t>(t);
    assigned += plan.entries[i].target_tokens;
    if (exact[i] > exact[largest]) largest = i;
  }
  if (assigned != total_tokens) {
    auto& target = plan.entries[largest].target_tokens;
    if (assigned > total_tokens) {
      const std::uint64_t excess = assigned - total_tokens;
      if (excess > target) throw ValidationError("rounding residue exceeds the largest entry");
      target -= excess;
    } else {
      target += total_tokens - assigned;
    }
  }

  for (auto& e : plan.entries) {
    e.epochs = static_cast<double>(e.target_tokens) / static_cast<double>(e.source.available_tokens);
    const double share = static_cast<double>(e.target_tokens) / static_cast<double>(total_tokens);
    plan.realized_shares[language_key(e.source.language)] += share;
    plan.realized_shares[domain_key(e.source.domain)] += share;
    plan.realized_shares["language_origin:" + e.source.language + "/" + e.source.origin] += share;
  }
  return plan;
}

std::vector<MixturePlan> plan_grid(std::span<const SourceSpec> sources,
                                   std::span<const LanguageRatio> ratios,
                                   std::uint64_t total_tokens, const std::string& arabic_code,
                                   const std::string& english_code) {
  std::vector<MixturePlan> plans;
  plans.reserve(ratios.size());
  for (const auto& r : ratios) {
    plans.push_back(plan_mixture(sources, {{arabic_code, r.arabic}, {english_code, r.english}},
                                 std::nullopt, total_tokens));
  }
  return plans;
}

ManifestReport verify_manifest(const MixturePlan& plan,
                               const std::map<std::string, std::uint64_t>& sampled_counts,
                               double tolerance) {
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be non-negative");
  for (const auto& [name, count] : sampled_counts) {
    bool known = false;
    for (const auto& e : plan.entries) known = known || e.source.name == name;
    if (!known) throw ValidationError("unknown source in counts: '" + name + "'");
  }

  std::map<std::string, long double> target;
  std::map<std::string, long double> realized;
  long double sampled_total = 0.0L;
  for (const auto& e : plan.entries) {
    auto it = sampled_counts.find(e.source.name);
    if (it == sampled_counts.end()) {
      throw ValidationError("counts are missing plan source '" + e.source.name + "'");
    }
    sampled_total += static_cast<long double>(it->second);
    for (const auto& key : {language_key(e.source.language), domain_key(e.source.domain)}) {
      target[key] += static_cast<long double>(e.target_tokens);
      realized[key] += static_cast<long double>(it->second);
    }
  }

  ManifestReport report;
  report.tolerance = tolerance;
  for (const auto& [key, t] : target) {
    ShareDeviation d;
    d.key = key;
    d.target = static_cast<double>(t / static_cast<long double>(plan.total_tokens));
    d.realized =
        sampled_total > 0 ? static_cast<double>(realized[key] / sampled_total) : 0.0;
    d.deviation = std::abs(d.realized - d.target);
    report.max_deviation = std::max(report.max_deviation, d.deviation);
    report.deviations.push_back(d);
  }
  std::stable_sort(report.deviations.begin(), report.deviations.end(),
                   [](const ShareDeviation& a, const ShareDeviation& b) {
                     const bool la = a.key.rfind("language:", 0) == 0;
                     const bool lb = b.key.rfind("language:", 0) == 0;
                     return la && !lb;
                   });
  report.passed = report.max_deviation <= tolerance;
  return report;
}

}  // namespace lexpand::mixture
