// SPDX-License-Identifier: Apache-2.0
#include "lexpand/tokenizer.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "lexpand/error.hpp"
#include "lexpand/random.hpp"
#include "lexpand/text.hpp"

namespace lexpand::tok {

TokenizerModel TokenizerModel::base(std::vector<std::string> specials) {
  std::vector<std::string> surfaces = specials;
  for (int b = 0; b < 256; ++b) surfaces.emplace_back(1, static_cast<char>(b));
  surfaces.emplace_back(text::kMetaspace);
  return from_parts(std::move(surfaces), std::move(specials), {});
}

TokenizerModel TokenizerModel::from_parts(std::vector<std::string> surfaces,
                                          std::vector<std::string> specials,
                                          std::vector<Merge> merges) {
  TokenizerModel model;
  model.surfaces_ = std::move(surfaces);
  model.specials_ = std::move(specials);
  model.merges_ = std::move(merges);
  model.index();
  return model;
}

void TokenizerModel::index() {
  if (surfaces_.size() > std::numeric_limits<TokenId>::max()) {
    throw DataError("vocabulary too large");
  }
  ids_.clear();
  ids_.reserve(surfaces_.size());
  for (std::size_t id = 0; id < surfaces_.size(); ++id) {
    const std::string& s = surfaces_[id];
    if (s.empty()) throw DataError("empty token surface at id " + std::to_string(id));
    if (!ids_.emplace(s, static_cast<TokenId>(id)).second) {
      throw DataError("duplicate token surface at id " + std::to_string(id));
    }
  }

  kinds_.assign(surfaces_.size(), TokenKind::learned);
  std::unordered_set<std::string> seen_specials;
  for (const auto& sp : specials_) {
    if (sp.size() < 2 || sp == text::kMetaspace) {
      throw DataError("special token surface must be longer than one byte and not the marker");
    }
    if (!seen_specials.insert(sp).second) throw DataError("duplicate special token: " + sp);
    auto it = ids_.find(sp);
    if (it == ids_.end()) throw DataError("special token missing from vocabulary: " + sp);
    kinds_[it->second] = TokenKind::special;
  }

  byte_ids_.assign(256, 0);
  for (int b = 0; b < 256; ++b) {
    auto it = ids_.find(std::string(1, static_cast<char>(b)));
    if (it == ids_.end()) throw DataError("byte token missing: " + std::to_string(b));
    byte_ids_[b] = it->second;
    kinds_[it->second] = TokenKind::byte;
  }
  auto marker = ids_.find(std::string(text::kMetaspace));
  if (marker == ids_.end()) throw DataError("metaspace marker token missing");
  if (kinds_[marker->second] == TokenKind::special) throw DataError("marker cannot be special");
  marker_id_ = marker->second;
  kinds_[marker_id_] = TokenKind::marker;

  rules_.clear();
  rules_.reserve(merges_.size());
  for (std::size_t rank = 0; rank < merges_.size(); ++rank) {
    const Merge& m = merges_[rank];
    auto l = ids_.find(m.left);
    auto r = ids_.find(m.right);
    auto out = ids_.find(m.left + m.right);
    if (l == ids_.end() || r == ids_.end() || out == ids_.end()) {
      throw DataError("merge " + std::to_string(rank) + " references a missing token");
    }
    if (kinds_[l->second] == TokenKind::special || kinds_[r->second] == TokenKind::special ||
        kinds_[out->second] == TokenKind::special) {
      throw DataError("merge " + std::to_string(rank) + " involves a special token");
    }
    const MergeRule rule{static_cast<std::uint32_t>(rank), out->second};
    if (!rules_.emplace(pair_key(l->second, r->second), rule).second) {
      throw DataError("duplicate merge at rank " + std::to_string(rank));
    }
  }

  specials_by_length_ = specials_;
  std::sort(specials_by_length_.begin(), specials_by_length_.end(),
            [](const std::string& a, const std::string& b) {
              return a.size() != b.size() ? a.size() > b.size() : a < b;
            });
}

std::optional<TokenId> TokenizerModel::find(std::string_view surface) const {
  auto it = ids_.find(std::string(surface));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool TokenizerModel::is_special(std::string_view surface) const {
  auto id = find(surface);
  return id && kinds_[*id] == TokenKind::special;
}

std::vector<Piece> TokenizerModel::pretokenize(std::string_view input) const {
  std::vector<Piece> pieces;
  bool first_word_done = false;

  auto split_ordinary = [&](std::string_view seg) {
    enum class Cls { space, literal, word };
    auto classify = [&](std::size_t pos, std::size_t& length) {
      const text::CodePoint cp = text::next_code_point(seg, pos);
      length = cp.length;
      if (!cp.valid) return Cls::word;
      if (text::is_whitespace(cp.value)) return Cls::space;
      if (cp.value == text::kMetaspaceCodePoint) return Cls::literal;
      return Cls::word;
    };

    bool consume_space = false;
    std::size_t i = 0;
    while (i < seg.size()) {
      std::size_t len = 0;
      const Cls cls = classify(i, len);
      if (cls == Cls::literal) {
        pieces.push_back({Piece::Kind::literal_marker, seg.substr(i, len), false});
        i += len;
        continue;
      }
      std::size_t j = i + len;
      while (j < seg.size()) {
        std::size_t next_len = 0;
        if (classify(j, next_len) != cls) break;
        j += next_len;
      }
      if (cls == Cls::word) {
        const bool marker = consume_space || !first_word_done;
        first_word_done = true;
        consume_space = false;
        pieces.push_back({Piece::Kind::word, seg.substr(i, j - i), marker});
      } else {
        std::size_t next_len = 0;
        const bool word_follows = j < seg.size() && classify(j, next_len) == Cls::word;
        std::size_t end = j;
        if (word_follows && first_word_done && seg[j - 1] == ' ') {
          consume_space = true;
          end = j - 1;
        }
        if (end > i) pieces.push_back({Piece::Kind::whitespace, seg.substr(i, end - i), false});
      }
      i = j;
    }
  };

  if (specials_by_length_.empty()) {
    split_ordinary(input);
    return pieces;
  }

  std::size_t segment_start = 0;
  std::size_t pos = 0;
  while (pos < input.size()) {
    const std::string* matched = nullptr;
    for (const auto& sp : specials_by_length_) {
      if (input.compare(pos, sp.size(), sp) == 0) {
        matched = &sp;
        break;
      }
    }
    if (matched == nullptr) {
      ++pos;
      continue;
    }
    if (pos > segment_start) split_ordinary(input.substr(segment_start, pos - segment_start));
    pieces.push_back({Piece::Kind::special, input.substr(pos, matched->size()), false});
    pos += matched->size();
    segment_start = pos;
  }
  if (segment_start < input.size()) split_ordinary(input.substr(segment_start));
  return pieces;
}

void TokenizerModel::apply_merges(std::vector<TokenId>& symbols) const {
  if (rules_.empty()) return;
  std::vector<TokenId> next;
  while (symbols.size() >= 2) {
    std::uint32_t best_rank = std::numeric_limits<std::uint32_t>::max();
    TokenId left = 0;
    TokenId right = 0;
    TokenId output = 0;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = rules_.find(pair_key(symbols[i], symbols[i + 1]));
      if (it != rules_.end() && it->second.rank < best_rank) {
        best_rank = it->second.rank;
        left = symbols[i];
        right = symbols[i + 1];
        output = it->second.output;
      }
    }
    if (best_rank == std::numeric_limits<std::uint32_t>::max()) break;
    next.clear();
    for (std::size_t i = 0; i < symbols.size();) {
      if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
        next.push_back(output);
        i += 2;
      } else {
        next.push_back(symbols[i]);
        ++i;
      }
    }
    symbols.swap(next);
  }
}

std::vector<TokenId> TokenizerModel::encode(std::string_view text) const {
  std::vector<TokenId> ids;
  ids.reserve(text.size() / 2);
  std::vector<TokenId> symbols;
  for (const Piece& piece : pretokenize(text)) {
    switch (piece.kind) {
      case Piece::Kind::special:
        ids.push_back(ids_.at(std::string(piece.bytes)));
        break;
      case Piece::Kind::literal_marker:
        for (unsigned char b : piece.bytes) ids.push_back(byte_ids_[b]);
        break;
      case Piece::Kind::word:
      case Piece::Kind::whitespace:
        symbols.clear();
        if (piece.marker) symbols.push_back(marker_id_);
        for (unsigned char b : piece.bytes) symbols.push_back(byte_ids_[b]);
        apply_merges(symbols);
        ids.insert(ids.end(), symbols.begin(), symbols.end());
        break;
    }
  }
  return ids;
}

std::vector<TokenId> TokenizerModel::encode_surface(std::string_view surface) const {
  if (auto id = find(surface); id && kinds_[*id] == TokenKind::special) return {*id};
  std::vector<TokenId> symbols;
  for (std::size_t pos = 0; pos < surface.size();) {
    if (surface.compare(pos, text::kMetaspace.size(), text::kMetaspace) == 0) {
      symbols.push_back(marker_id_);
      pos += text::kMetaspace.size();
    } else {
      symbols.push_back(byte_ids_[static_cast<unsigned char>(surface[pos])]);
      ++pos;
    }
  }
  apply_merges(symbols);
  return symbols;
}

DecodeResult TokenizerModel::decode(std::span<const TokenId> ids) const {
  std::string bytes;
  bool first_marker_pending = true;
  auto emit_marker = [&] {
    if (first_marker_pending) {
      first_marker_pending = false;
    } else {
      bytes.push_back(' ');
    }
  };
  for (TokenId id : ids) {
    if (id >= surfaces_.size()) {
      throw DataError("token id " + std::to_string(id) + " out of range (vocabulary size " +
                      std::to_string(surfaces_.size()) + ")");
    }
    const std::string& s = surfaces_[id];
    switch (kinds_[id]) {
      case TokenKind::special:
      case TokenKind::byte:
        bytes += s;
        break;
      case TokenKind::marker:
        emit_marker();
        break;
      case TokenKind::learned:
        for (std::size_t pos = 0; pos < s.size();) {
          if (s.compare(pos, text::kMetaspace.size(), text::kMetaspace) == 0) {
            emit_marker();
            pos += text::kMetaspace.size();
          } else {
            bytes.push_back(s[pos++]);
          }
        }
        break;
    }
  }
  DecodeResult result;
  if (text::is_valid_utf8(bytes)) {
    result.text = std::move(bytes);
  } else {
    result.replaced_invalid_utf8 = text::sanitize_utf8(bytes, result.text);
  }
  return result;
}

TokenizerModel merge_tokenizers(const TokenizerModel& original,
                                const TokenizerModel& language_specific) {
  for (const auto& sp : language_specific.specials()) {
    if (auto id = original.find(sp); id && original.kind(*id) != TokenKind::special) {
      throw ValidationError("special token '" + sp +
                            "' is an ordinary token in the original tokenizer");
    }
  }
  for (const auto& sp : original.specials()) {
    if (auto id = language_specific.find(sp);
        id && language_specific.kind(*id) != TokenKind::special) {
      throw ValidationError("special token '" + sp +
                            "' is an ordinary token in the language-specific tokenizer");
    }
  }

  std::vector<std::string> surfaces(original.surfaces().begin(), original.surfaces().end());
  for (const auto& s : language_specific.surfaces()) {
    if (!original.find(s)) surfaces.push_back(s);
  }

  std::vector<std::string> specials(original.specials().begin(), original.specials().end());
  for (const auto& sp : language_specific.specials()) {
    if (!original.is_special(sp)) specials.push_back(sp);
  }

  std::vector<Merge> merges(original.merges().begin(), original.merges().end());
  std::unordered_set<std::string> known;
  known.reserve(merges.size() * 2);
  auto key = [](const Merge& m) {
    std::string k = m.left;
    k.push_back('\0');
    k += m.right;
    return k;
  };
  for (const auto& m : merges) known.insert(key(m));
  for (const auto& m : language_specific.merges()) {
    if (known.insert(key(m)).second) merges.push_back(m);
  }
  return TokenizerModel::from_parts(std::move(surfaces), std::move(specials), std::move(merges));
}

FertilityReport fertility(const TokenizerModel& model, std::span<const std::string> corpus,
                          std::size_t sample_size, std::uint64_t seed, std::string corpus_id) {
  if (corpus.empty()) throw ValidationError("fertility: corpus is empty");
  Rng rng(seed);
  const std::size_t take = sample_size == 0 ? corpus.size() : std::min(sample_size, corpus.size());
  const std::vector<std::size_t> chosen = rng.sample_indices(corpus.size(), take);

  FertilityReport report;
  report.corpus_id = std::move(corpus_id);
  report.sample_seed = seed;
  report.sample_size = chosen.size();
  for (std::size_t i : chosen) {
    report.word_count += text::count_words(corpus[i]);
    report.token_count += model.encode(corpus[i]).size();
  }
  if (report.word_count == 0) throw DataError("fertility: sample contains no words");
  report.fertility =
      static_cast<double>(report.token_count) / static_cast<double>(report.word_count);
  return report;
}

}  // namespace lexpand::tok
