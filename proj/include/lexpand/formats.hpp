// SPDX-License-Identifier: Apache-2.0
// JSON mappings for every record type. Readers throw DataError on missing
// or mistyped fields.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lexpand/arena.hpp"
#include "lexpand/corpus_filter.hpp"
#include "lexpand/error.hpp"
#include "lexpand/jsonl.hpp"
#include "lexpand/mixture.hpp"
#include "lexpand/preference.hpp"
#include "lexpand/report.hpp"
#include "lexpand/sft_quality.hpp"
#include "lexpand/tokenizer.hpp"
#include "lexpand/turn_augment.hpp"

namespace lexpand {

using io::json;

void to_json(json& j, const FilterReport& r);

namespace tok {
void to_json(json& j, const FertilityReport& r);
}

namespace corpus {
void to_json(json& j, const Document& d);
void from_json(const json& j, Document& d);
}  // namespace corpus

namespace mixture {
void to_json(json& j, const SourceSpec& s);
void from_json(const json& j, SourceSpec& s);
void to_json(json& j, const PlanEntry& e);
void from_json(const json& j, PlanEntry& e);
void to_json(json& j, const MixturePlan& p);
void from_json(const json& j, MixturePlan& p);
void to_json(json& j, const ManifestReport& r);
}  // namespace mixture

namespace sft {
void to_json(json& j, const Turn& t);
void from_json(const json& j, Turn& t);
void to_json(json& j, const SftSample& s);
void from_json(const json& j, SftSample& s);
void to_json(json& j, const QualityReport& r);
void to_json(json& j, const TrainingSample& s);
void to_json(json& j, const ChatTemplate& t);
void from_json(const json& j, ChatTemplate& t);
}  // namespace sft

namespace pref {
void to_json(json& j, const Candidate& c);
void from_json(const json& j, Candidate& c);
void to_json(json& j, const PrefSeed& s);
void from_json(const json& j, PrefSeed& s);
void to_json(json& j, const PrefTriplet& t);
void from_json(const json& j, PrefTriplet& t);
void to_json(json& j, const AuditReport& r);
}  // namespace pref

namespace arena {
void to_json(json& j, const VoteRecord& v);
void from_json(const json& j, VoteRecord& v);
void to_json(json& j, const MatchResult& m);
void from_json(const json& j, MatchResult& m);
void to_json(json& j, const PendingGroup& g);
void to_json(json& j, const Rating& r);
json win_rates_to_json(const WinRateMatrix& m);
}  // namespace arena

namespace io {

/// Converts one JSON value, turning library exceptions into DataError
/// tagged with `where`.
template <typename T>
T decode(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw DataError(where + ": " + e.what());
  }
}

template <typename T>
std::vector<T> read_records(const std::filesystem::path& path) {
  const auto rows = read_jsonl(path);
  std::vector<T> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back(decode<T>(rows[i], path.string() + " record " + std::to_string(i + 1)));
  }
  return out;
}

template <typename T>
std::string records_to_jsonl(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    out += json(item).dump();
    out.push_back('\n');
  }
  return out;
}

template <typename T>
T read_json_file(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }
  return decode<T>(j, path.string());
}

}  // namespace io
}  // namespace lexpand
