// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lexpand/sft_quality.hpp"
#include "lexpand/tokenizer.hpp"

namespace lexpand::sft {

struct ChatTemplate {
  std::string bos = "<s>";
  std::string eos = "</s>";
  std::string user_prefix = "User: ";
  std::string assistant_prefix = "Assistant: ";
  /// Close earlier (masked) assistant turns with eos as well.
  bool eos_after_intermediate = true;
  /// Longest allowed sample; 0 disables the check.
  std::size_t max_tokens = 8192;

  const std::string& prefix(Role r) const {
    return r == Role::user ? user_prefix : assistant_prefix;
  }
};

/// Throws ValidationError unless bos and eos are specials of `tokenizer`
/// that encode to exactly one id each.
void check_template(const ChatTemplate& tmpl, const tok::TokenizerModel& tokenizer);

struct TrainingSample {
  std::string source_id;
  std::size_t turn_index = 0;  // 1-based assistant turn
  std::vector<tok::TokenId> token_ids;
  std::vector<std::uint8_t> loss_mask;

  bool operator==(const TrainingSample&) const = default;
};

/// Token sequence for the conversation up to and including assistant turn
/// `upto_turn`: bos, then each turn as encode(prefix) + encode(text), with
/// eos after the last rendered assistant turn (and after earlier ones when
/// the template says so). `upto_turn == 0` renders bos and the first user
/// turn.
std::vector<tok::TokenId> render(const SftSample& sample, const ChatTemplate& tmpl,
                                 const tok::TokenizerModel& tokenizer, std::size_t upto_turn);

/// One sample per assistant turn. Loss is active only on the target turn's
/// text tokens and the eos that closes it.
std::vector<TrainingSample> augment_turns(const SftSample& sample, const ChatTemplate& tmpl,
                                          const tok::TokenizerModel& tokenizer);

}  // namespace lexpand::sft
