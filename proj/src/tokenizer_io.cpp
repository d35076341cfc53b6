// SPDX-License-Identifier: Apache-2.0
// Text format:
//
//   lexpand-tokenizer
//   version 1
//   specials <count>
//   <surface>                  (one per line)
//   vocab <count>
//   <id> <surface>             (dense, ascending ids)
//   merges <count>
//   <left> <right>             (rank order)
//
// Surfaces are escaped so they never contain whitespace: bytes <= 0x20,
// 0x7F, backslash and bytes outside valid UTF-8 sequences are written as
// \xHH. Everything else is written verbatim.
#include <charconv>
#include <fstream>
#include <sstream>

#include "lexpand/error.hpp"
#include "lexpand/jsonl.hpp"
#include "lexpand/text.hpp"
#include "lexpand/tokenizer.hpp"

namespace lexpand::tok {
namespace {

constexpr std::string_view kMagic = "lexpand-tokenizer";
constexpr int kVersion = 1;

void append_hex(std::string& out, unsigned char b) {
  static constexpr char digits[] = "0123456789ABCDEF";
  out += "\\x";
  out.push_back(digits[b >> 4]);
  out.push_back(digits[b & 0xF]);
}

std::string escape(std::string_view s) {
  std::string out;
  for (std::size_t pos = 0; pos < s.size();) {
    const text::CodePoint cp = text::next_code_point(s, pos);
    const auto b = static_cast<unsigned char>(s[pos]);
    if (!cp.valid || (cp.length == 1 && (b <= 0x20 || b == 0x7F || b == '\\'))) {
      append_hex(out, b);
      pos += 1;
    } else {
      out.append(s.substr(pos, cp.length));
      pos += cp.length;
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string unescape(std::string_view s, std::size_t line) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 3 >= s.size() || s[i + 1] != 'x') {
      throw DataError("tokenizer line " + std::to_string(line) + ": bad escape");
    }
    const int hi = hex_value(s[i + 2]);
    const int lo = hex_value(s[i + 3]);
    if (hi < 0 || lo < 0) throw DataError("tokenizer line " + std::to_string(line) + ": bad escape");
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 3;
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::string_view contents) : contents_(contents) {}

  std::string_view next() {
    if (pos_ >= contents_.size()) {
      throw DataError("tokenizer file truncated after line " + std::to_string(line_));
    }
    const std::size_t end = contents_.find('\n', pos_);
    const std::size_t stop = end == std::string_view::npos ? contents_.size() : end;
    std::string_view line = contents_.substr(pos_, stop - pos_);
    pos_ = end == std::string_view::npos ? contents_.size() : end + 1;
    ++line_;
    return line;
  }

  bool done() const { return pos_ >= contents_.size(); }
  std::size_t line() const { return line_; }

 private:
  std::string_view contents_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::size_t parse_count(std::string_view text, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw DataError("tokenizer line " + std::to_string(line) + ": expected a number");
  }
  return value;
}

std::size_t parse_header(LineReader& reader, std::string_view field) {
  const std::string_view line = reader.next();
  if (line.size() <= field.size() + 1 || line.substr(0, field.size()) != field ||
      line[field.size()] != ' ') {
    throw DataError("tokenizer line " + std::to_string(reader.line()) + ": expected '" +
                    std::string(field) + "'");
  }
  return parse_count(line.substr(field.size() + 1), reader.line());
}

}  // namespace

std::string TokenizerModel::serialize() const {
  std::ostringstream out;
  out << kMagic << '\n' << "version " << kVersion << '\n';
  out << "specials " << specials_.size() << '\n';
  for (const auto& sp : specials_) out << escape(sp) << '\n';
  out << "vocab " << surfaces_.size() << '\n';
  for (std::size_t id = 0; id < surfaces_.size(); ++id) {
    out << id << ' ' << escape(surfaces_[id]) << '\n';
  }
  out << "merges " << merges_.size() << '\n';
  for (const auto& m : merges_) out << escape(m.left) << ' ' << escape(m.right) << '\n';
  return out.str();
}

TokenizerModel TokenizerModel::parse(std::string_view contents) {
  LineReader reader(contents);
  if (reader.next() != kMagic) throw DataError("not a lexpand tokenizer file");
  if (parse_header(reader, "version") != static_cast<std::size_t>(kVersion)) {
    throw DataError("unsupported tokenizer file version");
  }

  std::vector<std::string> specials(parse_header(reader, "specials"));
  for (auto& sp : specials) sp = unescape(reader.next(), reader.line());

  const std::size_t vocab_size = parse_header(reader, "vocab");
  std::vector<std::string> surfaces;
  surfaces.reserve(vocab_size);
  for (std::size_t id = 0; id < vocab_size; ++id) {
    const std::string_view line = reader.next();
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos) {
      throw DataError("tokenizer line " + std::to_string(reader.line()) + ": malformed vocab entry");
    }
    if (parse_count(line.substr(0, space), reader.line()) != id) {
      throw DataError("tokenizer line " + std::to_string(reader.line()) + ": ids must be dense");
    }
    surfaces.push_back(unescape(line.substr(space + 1), reader.line()));
  }

  std::vector<Merge> merges(parse_header(reader, "merges"));
  for (auto& m : merges) {
    const std::string_view line = reader.next();
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos || line.find(' ', space + 1) != std::string_view::npos) {
      throw DataError("tokenizer line " + std::to_string(reader.line()) + ": malformed merge");
    }
    m.left = unescape(line.substr(0, space), reader.line());
    m.right = unescape(line.substr(space + 1), reader.line());
  }
  if (!reader.done()) throw DataError("trailing content after tokenizer merges");
  return from_parts(std::move(surfaces), std::move(specials), std::move(merges));
}

void TokenizerModel::save(const std::filesystem::path& path) const {
  io::write_file_atomic(path, serialize());
}

TokenizerModel TokenizerModel::load(const std::filesystem::path& path) {
  return parse(io::read_file(path));
}

}  // namespace lexpand::tok
