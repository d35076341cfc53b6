// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexpand::tok {

using TokenId = std::uint32_t;

/// Byte-fallback BPE over byte symbols, with U+2581 as a reserved
/// word-boundary symbol.
///
/// Id layout for freshly built models: specials, the 256 byte tokens, the
/// marker, then learned tokens in merge order. Merged models keep the
/// original layout and append.
///
/// Encoding rules:
///  - special surfaces found in the text are emitted atomically;
///  - the text is split into words (maximal non-whitespace runs) and
///    whitespace runs;
///  - the first word always carries the marker; a later word carries it
///    when preceded by an ASCII space, which the marker replaces;
///  - a literal U+2581 in the input is emitted as its three byte tokens and
///    never merged, so decoding can tell it apart from the marker;
///  - merges are applied per piece, lowest rank first.
/// Decoding reverses this: the first marker is dropped, later markers
/// become spaces.
enum class TokenKind { special, byte, marker, learned };

struct Merge {
  std::string left;
  std::string right;
  bool operator==(const Merge&) const = default;
};

struct DecodeResult {
  std::string text;
  bool replaced_invalid_utf8 = false;
};

/// One unit of pre-tokenized text.
struct Piece {
  enum class Kind { word, whitespace, literal_marker, special };
  Kind kind = Kind::word;
  std::string_view bytes;
  bool marker = false;  // words only
};

class TokenizerModel {
 public:
  /// Base alphabet only: specials, bytes, marker.
  static TokenizerModel base(std::vector<std::string> specials);

  /// Builds a model from its parts and checks every invariant.
  /// Throws DataError on violation.
  static TokenizerModel from_parts(std::vector<std::string> surfaces,
                                   std::vector<std::string> specials,
                                   std::vector<Merge> merges);

  std::size_t size() const { return surfaces_.size(); }
  const std::string& surface(TokenId id) const { return surfaces_.at(id); }
  std::span<const std::string> surfaces() const { return surfaces_; }
  std::span<const std::string> specials() const { return specials_; }
  std::span<const Merge> merges() const { return merges_; }
  std::optional<TokenId> find(std::string_view surface) const;
  TokenKind kind(TokenId id) const { return kinds_.at(id); }
  bool is_special(std::string_view surface) const;

  TokenId byte_token(std::uint8_t b) const { return byte_ids_[b]; }
  TokenId marker_token() const { return marker_id_; }

  std::vector<TokenId> encode(std::string_view text) const;
  DecodeResult decode(std::span<const TokenId> ids) const;

  /// Tokenizes a token surface as a single piece: a leading U+2581 is the
  /// marker, the rest are bytes, then merges apply. Used to decompose new
  /// vocabulary entries.
  std::vector<TokenId> encode_surface(std::string_view surface) const;

  /// Splits text into pieces following the encoding rules above.
  std::vector<Piece> pretokenize(std::string_view text) const;

  /// Applies the merge list to a symbol sequence in place.
  void apply_merges(std::vector<TokenId>& symbols) const;

  std::string serialize() const;
  static TokenizerModel parse(std::string_view contents);
  void save(const std::filesystem::path& path) const;
  static TokenizerModel load(const std::filesystem::path& path);

  bool operator==(const TokenizerModel& other) const {
    return surfaces_ == other.surfaces_ && specials_ == other.specials_ &&
           merges_ == other.merges_;
  }

 private:
  struct MergeRule {
    std::uint32_t rank;
    TokenId output;
  };

  TokenizerModel() = default;
  void index();
  static std::uint64_t pair_key(TokenId l, TokenId r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
  }

  std::vector<std::string> surfaces_;
  std::vector<std::string> specials_;
  std::vector<Merge> merges_;
  std::vector<TokenKind> kinds_;
  std::unordered_map<std::string, TokenId> ids_;
  std::unordered_map<std::uint64_t, MergeRule> rules_;
  std::vector<TokenId> byte_ids_;
  TokenId marker_id_ = 0;
  std::vector<std::string> specials_by_length_;
};

struct TrainOptions {
  std::size_t vocab_size = 32000;
  std::vector<std::string> specials;
  /// When non-zero, train on a seeded uniform subsample of this many documents.
  std::size_t max_documents = 0;
  std::uint64_t seed = 0;
};

/// Greedy BPE: each step merges the most frequent adjacent pair; ties go to
/// the lexicographically smallest concatenated surface, then the smaller
/// left surface. Stops at `vocab_size` entries or when no pair remains.
TokenizerModel train_bpe(std::span<const std::string> corpus, const TrainOptions& options);

/// Original vocabulary and merges first, then everything the
/// language-specific model adds. Original ids are unchanged.
TokenizerModel merge_tokenizers(const TokenizerModel& original,
                                const TokenizerModel& language_specific);

struct FertilityReport {
  std::string corpus_id;
  std::size_t token_count = 0;
  std::size_t word_count = 0;
  double fertility = 0.0;
  std::uint64_t sample_seed = 0;
  std::size_t sample_size = 0;
};

/// Tokens per whitespace-delimited word over a seeded uniform subsample.
/// `sample_size == 0` or larger than the corpus uses every document.
FertilityReport fertility(const TokenizerModel& model, std::span<const std::string> corpus,
                          std::size_t sample_size, std::uint64_t seed,
                          std::string corpus_id = {});

}  // namespace lexpand::tok
