// SPDX-License-Identifier: Apache-2.0
#include "lexpand/embedding.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "lexpand/jsonl.hpp"
#include "lexpand/random.hpp"

namespace lexpand::embed {
namespace {

constexpr std::string_view kMagic = "EMB1";
constexpr std::size_t kHeaderSize = 12;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return v;
}

void require_finite(const EmbeddingMatrix& m) {
  if (m.data.size() != static_cast<std::size_t>(m.rows) * m.dim) {
    throw ValidationError("embedding matrix holds " + std::to_string(m.data.size()) +
                          " values, expected rows * dim");
  }
  for (float v : m.data) {
    if (!std::isfinite(v)) throw ValidationError("embedding matrix contains non-finite values");
  }
}

}  // namespace

void average_rows(const EmbeddingMatrix& m, std::span<const tok::TokenId> ids,
                  std::span<float> out) {
  if (ids.empty()) throw ValidationError("cannot average an empty set of rows");
  if (out.size() != m.dim) throw ValidationError("output row has the wrong dimension");
  std::vector<double> acc(m.dim, 0.0);
  for (tok::TokenId id : ids) {
    if (id >= m.rows) throw ValidationError("row " + std::to_string(id) + " out of range");
    const auto src = m.row(id);
    for (std::size_t j = 0; j < m.dim; ++j) acc[j] += src[j];
  }
  const auto n = static_cast<double>(ids.size());
  for (std::size_t j = 0; j < m.dim; ++j) out[j] = static_cast<float>(acc[j] / n);
}

InitMode parse_init_mode(const std::string& name) {
  if (name == "averaged") return InitMode::averaged;
  if (name == "random") return InitMode::random;
  throw ValidationError("unknown init mode '" + name + "' (expected averaged or random)");
}

EmbeddingMatrix expand_embeddings(const EmbeddingMatrix& original,
                                  const tok::TokenizerModel& original_tok,
                                  const tok::TokenizerModel& merged_tok, InitMode mode,
                                  std::uint64_t seed) {
  require_finite(original);
  if (original.rows != original_tok.size()) {
    throw ValidationError("matrix has " + std::to_string(original.rows) +
                          " rows but the original tokenizer has " +
                          std::to_string(original_tok.size()) + " tokens");
  }
  if (merged_tok.size() < original_tok.size()) {
    throw ValidationError("merged tokenizer is smaller than the original");
  }
  for (tok::TokenId id = 0; id < original_tok.size(); ++id) {
    if (merged_tok.surface(id) != original_tok.surface(id)) {
      throw ValidationError("merged tokenizer does not preserve original id " + std::to_string(id));
    }
  }
  if (merged_tok.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("merged vocabulary too large");
  }

  const std::size_t dim = original.dim;
  EmbeddingMatrix out(static_cast<std::uint32_t>(merged_tok.size()), original.dim);
  std::copy(original.data.begin(), original.data.end(), out.data.begin());
  const std::size_t first_new = original.rows;
  if (first_new == out.rows) return out;

  if (mode == InitMode::averaged) {
    for (std::size_t id = first_new; id < out.rows; ++id) {
      const auto parts = original_tok.encode_surface(merged_tok.surface(static_cast<tok::TokenId>(id)));
      average_rows(original, parts, out.row(id));
    }
    return out;
  }

  if (original.rows == 0) {
    throw ValidationError("random initialization needs a non-empty original matrix");
  }
  std::vector<double> mean(dim, 0.0);
  double grand = 0.0;
  for (std::size_t r = 0; r < original.rows; ++r) {
    const auto src = original.row(r);
    for (std::size_t j = 0; j < dim; ++j) {
      mean[j] += src[j];
      grand += src[j];
    }
  }
  const double n_rows = static_cast<double>(original.rows);
  for (double& m : mean) m /= n_rows;
  const double n_values = static_cast<double>(original.data.size());
  grand = n_values > 0 ? grand / n_values : 0.0;
  double var = 0.0;
  for (float v : original.data) var += (v - grand) * (v - grand);
  const double stddev = n_values > 0 ? std::sqrt(var / n_values) : 0.0;

  Rng rng(seed);
  for (std::size_t id = first_new; id < out.rows; ++id) {
    auto dst = out.row(id);
    for (std::size_t j = 0; j < dim; ++j) {
      dst[j] = static_cast<float>(mean[j] + stddev * rng.normal());
    }
  }
  return out;
}

std::string encode_matrix(const EmbeddingMatrix& m) {
  if (m.data.size() != static_cast<std::size_t>(m.rows) * m.dim) {
    throw ValidationError("embedding matrix holds the wrong number of values");
  }
  std::string out;
  out.reserve(kHeaderSize + m.data.size() * 4);
  out.append(kMagic);
  put_u32(out, m.rows);
  put_u32(out, m.dim);
  for (float v : m.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

EmbeddingMatrix decode_matrix(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    throw MatrixFormatError(MatrixErrorCode::bad_magic, "embedding file: bad magic");
  }
  if (bytes.size() < kHeaderSize) {
    throw MatrixFormatError(MatrixErrorCode::truncated, "embedding file: truncated header");
  }
  const std::uint32_t rows = get_u32(bytes, 4);
  const std::uint32_t dim = get_u32(bytes, 8);
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * dim;
  if (count > (std::numeric_limits<std::uint64_t>::max() - kHeaderSize) / 4 ||
      count > std::numeric_limits<std::size_t>::max() / 4) {
    throw MatrixFormatError(MatrixErrorCode::size_overflow, "embedding file: rows * dim overflows");
  }
  const std::uint64_t expected = kHeaderSize + count * 4;
  if (bytes.size() < expected) {
    throw MatrixFormatError(MatrixErrorCode::truncated,
                            "embedding file: truncated, expected " + std::to_string(expected) +
                                " bytes, found " + std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw MatrixFormatError(MatrixErrorCode::trailing_bytes, "embedding file: trailing bytes");
  }
  EmbeddingMatrix m(rows, dim);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    m.data[i] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * i));
  }
  return m;
}

void save_matrix(const EmbeddingMatrix& m, const std::filesystem::path& path) {
  io::write_file_atomic(path, encode_matrix(m));
}

EmbeddingMatrix load_matrix(const std::filesystem::path& path) {
  return decode_matrix(io::read_file(path));
}

}  // namespace lexpand::embed
