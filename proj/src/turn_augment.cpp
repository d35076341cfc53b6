// SPDX-License-Identifier: Apache-2.0
#include "lexpand/turn_augment.hpp"

#include <algorithm>

#include "lexpand/error.hpp"
#include "lexpand/text.hpp"

namespace lexpand::sft {
namespace {

tok::TokenId special_id(const std::string& surface, const char* name,
                        const tok::TokenizerModel& tokenizer) {
  if (!tokenizer.is_special(surface)) {
    throw ValidationError(std::string("template ") + name + " '" + surface +
                          "' is not a special token of the tokenizer");
  }
  const auto ids = tokenizer.encode(surface);
  if (ids.size() != 1) {
    throw ValidationError(std::string("template ") + name + " '" + surface + "' encodes to " +
                          std::to_string(ids.size()) + " tokens");
  }
  return ids.front();
}

struct EncodedTurn {
  Role role;
  std::vector<tok::TokenId> prefix;
  std::vector<tok::TokenId> text;
};

struct Prepared {
  tok::TokenId bos;
  tok::TokenId eos;
  std::vector<EncodedTurn> turns;
  std::size_t assistant_turns = 0;
};

Prepared prepare(const SftSample& sample, const ChatTemplate& tmpl,
                 const tok::TokenizerModel& tokenizer) {
  Prepared p{special_id(tmpl.bos, "bos", tokenizer), special_id(tmpl.eos, "eos", tokenizer), {}, 0};
  if (!well_formed(sample.conversation)) {
    throw DataError("sample '" + sample.id +
                    "': roles must alternate user/assistant and end on an assistant turn");
  }
  const auto user_prefix = tokenizer.encode(tmpl.user_prefix);
  const auto assistant_prefix = tokenizer.encode(tmpl.assistant_prefix);
  for (const auto& t : sample.conversation) {
    if (t.role == Role::assistant) {
      ++p.assistant_turns;
      if (text::is_blank(t.text)) {
        throw DataError("sample '" + sample.id + "': assistant turn " +
                        std::to_string(p.assistant_turns) +
                        " is empty; remove it with `sft flag` first");
      }
    }
    p.turns.push_back({t.role, t.role == Role::user ? user_prefix : assistant_prefix,
                       tokenizer.encode(t.text)});
  }
  return p;
}

void append(std::vector<tok::TokenId>& out, const std::vector<tok::TokenId>& ids) {
  out.insert(out.end(), ids.begin(), ids.end());
}

// Builds the sequence up to assistant turn k; when `mask` is given, marks the
// k-th assistant turn's text and eos.
std::vector<tok::TokenId> build(const Prepared& p, const ChatTemplate& tmpl, std::size_t k,
                                std::vector<std::uint8_t>* mask) {
  std::vector<tok::TokenId> ids{p.bos};
  std::size_t seen = 0;
  for (const auto& t : p.turns) {
    if (t.role == Role::user) {
      append(ids, t.prefix);
      append(ids, t.text);
      if (k == 0) break;
      continue;
    }
    ++seen;
    append(ids, t.prefix);
    const std::size_t start = ids.size();
    append(ids, t.text);
    if (seen == k || tmpl.eos_after_intermediate) ids.push_back(p.eos);
    if (seen == k) {
      if (mask != nullptr) {
        mask->assign(ids.size(), 0);
        std::fill(mask->begin() + static_cast<std::ptrdiff_t>(start), mask->end(), 1);
      }
      break;
    }
  }
  if (tmpl.max_tokens != 0 && ids.size() > tmpl.max_tokens) {
    throw DataError("rendered sample has " + std::to_string(ids.size()) +
                    " tokens, above max_tokens " + std::to_string(tmpl.max_tokens));
  }
  return ids;
}

}  // namespace

void check_template(const ChatTemplate& tmpl, const tok::TokenizerModel& tokenizer) {
  special_id(tmpl.bos, "bos", tokenizer);
  special_id(tmpl.eos, "eos", tokenizer);
}

std::vector<tok::TokenId> render(const SftSample& sample, const ChatTemplate& tmpl,
                                 const tok::TokenizerModel& tokenizer, std::size_t upto_turn) {
  const Prepared p = prepare(sample, tmpl, tokenizer);
  if (upto_turn > p.assistant_turns) {
    throw ValidationError("upto_turn " + std::to_string(upto_turn) + " exceeds the " +
                          std::to_string(p.assistant_turns) + " assistant turns of sample '" +
                          sample.id + "'");
  }
  return build(p, tmpl, upto_turn, nullptr);
}

std::vector<TrainingSample> augment_turns(const SftSample& sample, const ChatTemplate& tmpl,
                                          const tok::TokenizerModel& tokenizer) {
  const Prepared p = prepare(sample, tmpl, tokenizer);
  std::vector<TrainingSample> out;
  out.reserve(p.assistant_turns);
  for (std::size_t k = 1; k <= p.assistant_turns; ++k) {
    TrainingSample s;
    s.source_id = sample.id;
    s.turn_index = k;
    s.token_ids = build(p, tmpl, k, &s.loss_mask);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace lexpand::sft
