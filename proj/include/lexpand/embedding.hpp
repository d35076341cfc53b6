// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lexpand/error.hpp"
#include "lexpand/tokenizer.hpp"

namespace lexpand::embed {

/// Row-major float32 matrix, one row per token id.
struct EmbeddingMatrix {
  std::uint32_t rows = 0;
  std::uint32_t dim = 0;
  std::vector<float> data;

  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::uint32_t rows, std::uint32_t dim)
      : rows(rows), dim(dim), data(static_cast<std::size_t>(rows) * dim, 0.0f) {}

  std::span<float> row(std::size_t i) { return {data.data() + i * dim, dim}; }
  std::span<const float> row(std::size_t i) const { return {data.data() + i * dim, dim}; }

  bool operator==(const EmbeddingMatrix&) const = default;
};

/// Component-wise mean of the listed rows, accumulated in double.
void average_rows(const EmbeddingMatrix& m, std::span<const tok::TokenId> ids,
                  std::span<float> out);

enum class InitMode { averaged, random };

InitMode parse_init_mode(const std::string& name);

/// Grows `original` to the merged vocabulary. Rows of original ids are
/// copied bit for bit. New rows are either the mean of the original rows
/// of the token's decomposition under `original_tok`, or draws from
/// N(per-dimension mean, global standard deviation) of the original matrix.
EmbeddingMatrix expand_embeddings(const EmbeddingMatrix& original,
                                  const tok::TokenizerModel& original_tok,
                                  const tok::TokenizerModel& merged_tok, InitMode mode,
                                  std::uint64_t seed);

// Binary interchange format: "EMB1", rows (u32 LE), dim (u32 LE), then
// rows * dim float32 LE values, row-major.

enum class MatrixErrorCode { bad_magic, truncated, size_overflow, trailing_bytes };

class MatrixFormatError : public DataError {
 public:
  MatrixFormatError(MatrixErrorCode code, const std::string& message)
      : DataError(message), code_(code) {}
  MatrixErrorCode code() const noexcept { return code_; }

 private:
  MatrixErrorCode code_;
};

std::string encode_matrix(const EmbeddingMatrix& m);
EmbeddingMatrix decode_matrix(std::string_view bytes);
void save_matrix(const EmbeddingMatrix& m, const std::filesystem::path& path);
EmbeddingMatrix load_matrix(const std::filesystem::path& path);

}  // namespace lexpand::embed
