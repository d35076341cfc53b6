// SPDX-License-Identifier: Apache-2.0
#include "lexpand/jsonl.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "lexpand/error.hpp"

namespace lexpand::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write output file: " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw ValidationError("failed writing output file: " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw ValidationError("cannot move output into place: " + path.string() + ": " + ec.message());
  }
}

std::vector<json> parse_jsonl(std::string_view contents, const std::string& source) {
  std::vector<json> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    const std::size_t end = contents.find('\n', pos);
    const std::size_t stop = end == std::string_view::npos ? contents.size() : end;
    std::string_view line = contents.substr(pos, stop - pos);
    pos = stop + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw DataError(source + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
  }
  return rows;
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_file(path), path.string());
}

std::string to_jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out.push_back('\n');
  }
  return out;
}

std::string to_pretty(const json& value) { return value.dump(2) + "\n"; }

}  // namespace lexpand::io
