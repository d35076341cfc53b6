// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>

namespace lexpand {

/// Drop accounting shared by every filter: input_count == kept_count + sum(dropped).
struct FilterReport {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::map<std::string, std::size_t> dropped_by_rule;

  std::size_t dropped_total() const {
    std::size_t n = 0;
    for (const auto& [rule, count] : dropped_by_rule) n += count;
    return n;
  }
  bool reconciles() const { return input_count == kept_count + dropped_total(); }

  void merge(const FilterReport& other) {
    input_count += other.input_count;
    kept_count += other.kept_count;
    for (const auto& [rule, count] : other.dropped_by_rule) dropped_by_rule[rule] += count;
  }
};

}  // namespace lexpand
