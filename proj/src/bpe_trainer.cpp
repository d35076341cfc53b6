// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>
#include <queue>
#include <unordered_map>

#include "lexpand/error.hpp"
#include "lexpand/random.hpp"
#include "lexpand/tokenizer.hpp"

namespace lexpand::tok {
namespace {

struct Word {
  std::vector<TokenId> symbols;
  std::int64_t freq = 0;
};

std::uint64_t key_of(TokenId l, TokenId r) { return (static_cast<std::uint64_t>(l) << 32) | r; }
TokenId left_of(std::uint64_t key) { return static_cast<TokenId>(key >> 32); }
TokenId right_of(std::uint64_t key) { return static_cast<TokenId>(key & 0xFFFFFFFFu); }

// Three-way comparison of (a1 + a2) against (b1 + b2) without allocating.
int compare_concat(std::string_view a1, std::string_view a2, std::string_view b1,
                   std::string_view b2) {
  const std::size_t na = a1.size() + a2.size();
  const std::size_t nb = b1.size() + b2.size();
  const std::size_t n = std::min(na, nb);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ca = static_cast<unsigned char>(i < a1.size() ? a1[i] : a2[i - a1.size()]);
    const auto cb = static_cast<unsigned char>(i < b1.size() ? b1[i] : b2[i - b1.size()]);
    if (ca != cb) return ca < cb ? -1 : 1;
  }
  return na == nb ? 0 : (na < nb ? -1 : 1);
}

struct Candidate {
  std::int64_t count;
  std::uint64_t pair;
};

class CandidateOrder {
 public:
  explicit CandidateOrder(const std::vector<std::string>* surfaces) : surfaces_(surfaces) {}

  // priority_queue keeps the "largest" on top; "a < b" means b is preferred.
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.count != b.count) return a.count < b.count;
    const auto& s = *surfaces_;
    const std::string& al = s[left_of(a.pair)];
    const std::string& ar = s[right_of(a.pair)];
    const std::string& bl = s[left_of(b.pair)];
    const std::string& br = s[right_of(b.pair)];
    const int c = compare_concat(al, ar, bl, br);
    if (c != 0) return c > 0;
    return al > bl;
  }

 private:
  const std::vector<std::string>* surfaces_;
};

}  // namespace

TokenizerModel train_bpe(std::span<const std::string> corpus, const TrainOptions& options) {
  if (corpus.empty()) throw ValidationError("train_bpe: corpus is empty");
  const TokenizerModel base = TokenizerModel::base(options.specials);
  if (options.vocab_size < base.size()) {
    throw ValidationError("train_bpe: vocab_size " + std::to_string(options.vocab_size) +
                          " is below the base alphabet size " + std::to_string(base.size()));
  }

  std::vector<std::size_t> docs(corpus.size());
  for (std::size_t i = 0; i < docs.size(); ++i) docs[i] = i;
  if (options.max_documents != 0 && options.max_documents < corpus.size()) {
    Rng rng(options.seed);
    docs = rng.sample_indices(corpus.size(), options.max_documents);
  }

  // Piece frequencies; the key carries the marker flag in its first byte.
  std::map<std::string, std::int64_t> piece_counts;
  std::size_t total_bytes = 0;
  for (std::size_t d : docs) {
    total_bytes += corpus[d].size();
    for (const Piece& piece : base.pretokenize(corpus[d])) {
      if (piece.kind != Piece::Kind::word && piece.kind != Piece::Kind::whitespace) continue;
      std::string key(1, piece.marker ? '\1' : '\0');
      key.append(piece.bytes);
      ++piece_counts[key];
    }
  }
  if (total_bytes == 0) throw ValidationError("train_bpe: corpus contains no text");

  std::vector<std::string> surfaces(base.surfaces().begin(), base.surfaces().end());
  std::unordered_map<std::string, TokenId> ids;
  for (std::size_t i = 0; i < surfaces.size(); ++i) ids.emplace(surfaces[i], static_cast<TokenId>(i));

  std::vector<Word> words;
  words.reserve(piece_counts.size());
  for (const auto& [key, count] : piece_counts) {
    Word w;
    w.freq = count;
    if (key[0] == '\1') w.symbols.push_back(base.marker_token());
    for (std::size_t i = 1; i < key.size(); ++i) {
      w.symbols.push_back(base.byte_token(static_cast<std::uint8_t>(key[i])));
    }
    words.push_back(std::move(w));
  }

  std::unordered_map<std::uint64_t, std::int64_t> pair_counts;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> where;
  for (std::uint32_t wi = 0; wi < words.size(); ++wi) {
    const auto& syms = words[wi].symbols;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      const std::uint64_t k = key_of(syms[i], syms[i + 1]);
      pair_counts[k] += words[wi].freq;
      where[k].push_back(wi);
    }
  }

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> queue{
      CandidateOrder(&surfaces)};
  for (const auto& [k, c] : pair_counts) queue.push({c, k});

  std::vector<Merge> merges;
  std::vector<std::uint64_t> touched;
  std::vector<TokenId> merged;
  while (surfaces.size() < options.vocab_size && !queue.empty()) {
    const Candidate top = queue.top();
    queue.pop();
    auto live = pair_counts.find(top.pair);
    if (live == pair_counts.end() || live->second != top.count || top.count <= 0) continue;

    const TokenId left = left_of(top.pair);
    const TokenId right = right_of(top.pair);
    std::string out_surface = surfaces[left] + surfaces[right];
    TokenId out_id = 0;
    if (auto it = ids.find(out_surface); it != ids.end()) {
      out_id = it->second;
    } else {
      out_id = static_cast<TokenId>(surfaces.size());
      ids.emplace(out_surface, out_id);
      surfaces.push_back(std::move(out_surface));
    }
    merges.push_back({surfaces[left], surfaces[right]});

    std::vector<std::uint32_t> affected = std::move(where[top.pair]);
    where.erase(top.pair);
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

    touched.clear();
    for (std::uint32_t wi : affected) {
      Word& w = words[wi];
      auto& syms = w.symbols;
      bool present = false;
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        if (syms[i] == left && syms[i + 1] == right) {
          present = true;
          break;
        }
      }
      if (!present) continue;

      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        const std::uint64_t k = key_of(syms[i], syms[i + 1]);
        pair_counts[k] -= w.freq;
        touched.push_back(k);
      }
      merged.clear();
      for (std::size_t i = 0; i < syms.size();) {
        if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
          merged.push_back(out_id);
          i += 2;
        } else {
          merged.push_back(syms[i++]);
        }
      }
      syms.swap(merged);
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        const std::uint64_t k = key_of(syms[i], syms[i + 1]);
        pair_counts[k] += w.freq;
        where[k].push_back(wi);
        touched.push_back(k);
      }
    }

    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::uint64_t k : touched) {
      auto it = pair_counts.find(k);
      if (it->second > 0) {
        queue.push({it->second, k});
      } else {
        pair_counts.erase(it);
      }
    }
  }

  return TokenizerModel::from_parts(std::move(surfaces), options.specials, std::move(merges));
}

}  // namespace lexpand::tok
