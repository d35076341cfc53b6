// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lexpand::io {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Parses every non-blank line as a JSON value. Errors carry the line number.
std::vector<json> read_jsonl(const std::filesystem::path& path);
std::vector<json> parse_jsonl(std::string_view contents, const std::string& source = "<memory>");

/// One compact JSON value per line, newline-terminated.
std::string to_jsonl(const std::vector<json>& rows);

/// Pretty JSON with a trailing newline.
std::string to_pretty(const json& value);

}  // namespace lexpand::io
