// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lexpand/jsonl.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(LEXPAND_FIXTURES_DIR) / name;
}

inline std::vector<std::string> fixture_texts(const std::string& name) {
  std::vector<std::string> out;
  for (const auto& row : lexpand::io::read_jsonl(fixture(name))) {
    out.push_back(row.at("text").get<std::string>());
  }
  return out;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("lexpand-test-" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
