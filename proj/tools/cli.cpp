// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "lexpand/arena.hpp"
#include "lexpand/corpus_filter.hpp"
#include "lexpand/embedding.hpp"
#include "lexpand/error.hpp"
#include "lexpand/formats.hpp"
#include "lexpand/jsonl.hpp"
#include "lexpand/mixture.hpp"
#include "lexpand/normalize.hpp"
#include "lexpand/preference.hpp"
#include "lexpand/sft_quality.hpp"
#include "lexpand/tokenizer.hpp"
#include "lexpand/turn_augment.hpp"

namespace lexpand::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

/// Raised by commands that ran fine but whose verdict is a failure.
class CheckFailed : public DataError {
 public:
  using DataError::DataError;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool verbose = false;

  void log(const std::string& message) const {
    if (verbose) err << json{{"level", "info"}, {"message", message}}.dump() << '\n';
  }

  /// Writes to `path` atomically, or to stdout when no path was given.
  void emit(const std::string& path, const std::string& contents) const {
    if (path.empty()) {
      out << contents;
    } else {
      io::write_file_atomic(path, contents);
    }
  }
};

void check_output(const std::string& path) {
  if (path.empty()) return;
  const fs::path p(path);
  const fs::path parent = p.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ValidationError("output directory does not exist: " + parent.string());
  }
  if (fs::is_directory(p)) throw ValidationError("output path is a directory: " + path);
}

void check_outputs(std::initializer_list<const std::string*> paths) {
  for (const auto* p : paths) check_output(*p);
}

std::vector<std::string> read_texts(const std::string& path) {
  const auto rows = io::read_jsonl(path);
  std::vector<std::string> texts;
  texts.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!row.is_object() || !row.contains("text") || !row["text"].is_string()) {
      throw DataError(path + " record " + std::to_string(i + 1) + ": missing string field 'text'");
    }
    texts.push_back(row["text"].get<std::string>());
  }
  return texts;
}

std::map<std::string, double> parse_shares(const std::string& spec, const char* flag) {
  std::map<std::string, double> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string item = spec.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError(std::string(flag) + ": expected name=fraction, got '" + item + "'");
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": bad number in '" + item + "'");
    }
    if (!out.emplace(item.substr(0, eq), value).second) {
      throw ValidationError(std::string(flag) + ": '" + item.substr(0, eq) + "' given twice");
    }
    pos = comma + 1;
  }
  return out;
}

std::uint64_t parse_token_count(const std::string& text) {
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ValidationError("--total-tokens: not a number: '" + text + "'");
  }
  if (!(value >= 1.0) || value > 1.8e19 || std::floor(value) != value) {
    throw ValidationError("--total-tokens must be a positive integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(value);
}

std::vector<mixture::SourceSpec> read_sources(const std::string& path) {
  const std::string contents = io::read_file(path);
  const auto first = contents.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && contents[first] == '[') {
    json j;
    try {
      j = json::parse(contents);
    } catch (const json::parse_error& e) {
      throw DataError(path + ": invalid JSON: " + e.what());
    }
    return io::decode<std::vector<mixture::SourceSpec>>(j, path);
  }
  return io::read_records<mixture::SourceSpec>(path);
}

text::Lexicon load_stopwords(const std::string& path) {
  if (path.empty()) return text::Lexicon(text::default_stopwords());
  return text::Lexicon(text::load_word_list(path));
}

// ---------------------------------------------------------------- tok

void add_tok(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* tok = app.add_subcommand("tok", "Tokenizer training, merging, encoding and fertility");
  tok->require_subcommand(1);

  {
    auto* cmd = tok->add_subcommand("train", "Train a byte-fallback BPE tokenizer");
    struct Opts {
      std::string input, output;
      std::size_t vocab_size = 32000;
      std::vector<std::string> specials{"<s>", "</s>", "<pad>"};
      std::size_t max_documents = 0;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input, "JSONL documents with a 'text' field")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--output", o->output, "Tokenizer file to write")->required();
    cmd->add_option("--vocab-size", o->vocab_size, "Target vocabulary size")->capture_default_str();
    cmd->add_option("--special", o->specials, "Special token surfaces")->capture_default_str();
    cmd->add_option("--max-documents", o->max_documents, "Train on a seeded subsample (0 = all)");
    cmd->add_option("--seed", o->seed, "Seed for subsampling")->capture_default_str();
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto texts = read_texts(o->input);
        tok::TrainOptions opts{o->vocab_size, o->specials, o->max_documents, o->seed};
        const auto model = tok::train_bpe(texts, opts);
        model.save(o->output);
        ctx.log("trained " + std::to_string(model.size()) + " tokens");
      };
    });
  }

  {
    auto* cmd = tok->add_subcommand("merge", "Append a language-specific tokenizer to an original one");
    struct Opts {
      std::string original, language, output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--original", o->original)->required()->check(CLI::ExistingFile);
    cmd->add_option("--language", o->language, "Language-specific tokenizer")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--output", o->output)->required();
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto original = tok::TokenizerModel::load(o->original);
        const auto language = tok::TokenizerModel::load(o->language);
        const auto merged = tok::merge_tokenizers(original, language);
        merged.save(o->output);
        ctx.log("merged vocabulary has " + std::to_string(merged.size()) + " tokens (" +
                std::to_string(merged.size() - original.size()) + " new)");
      };
    });
  }

  {
    auto* cmd = tok->add_subcommand("encode", "Encode text or JSONL documents to token ids");
    struct Opts {
      std::string tokenizer, input, text, output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--tokenizer", o->tokenizer)->required()->check(CLI::ExistingFile);
    auto* in = cmd->add_option("--input", o->input, "JSONL documents with a 'text' field")
                   ->check(CLI::ExistingFile);
    auto* txt = cmd->add_option("--text", o->text, "Encode one string");
    in->excludes(txt);
    cmd->add_option("--output", o->output, "JSONL output (default: stdout)");
    cmd->callback([&ctx, &action, o, in, txt] {
      if (in->count() == 0 && txt->count() == 0) {
        throw CLI::RequiredError("one of --input or --text");
      }
      action = [&ctx, o, from_file = in->count() > 0] {
        check_output(o->output);
        const auto model = tok::TokenizerModel::load(o->tokenizer);
        std::vector<std::string> texts = from_file ? read_texts(o->input)
                                                   : std::vector<std::string>{o->text};
        std::string lines;
        for (std::size_t i = 0; i < texts.size(); ++i) {
          const auto ids = model.encode(texts[i]);
          lines += json{{"index", i}, {"token_ids", ids}}.dump();
          lines.push_back('\n');
        }
        ctx.emit(o->output, lines);
      };
    });
  }

  {
    auto* cmd = tok->add_subcommand("fertility", "Tokens per word over a seeded document sample");
    struct Opts {
      std::string tokenizer, input, output, corpus_id;
      std::size_t sample_size = 0;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--tokenizer", o->tokenizer)->required()->check(CLI::ExistingFile);
    cmd->add_option("--input", o->input, "JSONL documents with a 'text' field")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--sample-size", o->sample_size, "Documents to sample (0 = all)")
        ->capture_default_str();
    cmd->add_option("--seed", o->seed)->capture_default_str();
    cmd->add_option("--corpus-id", o->corpus_id, "Label stored in the report");
    cmd->add_option("--output", o->output, "JSON report (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto model = tok::TokenizerModel::load(o->tokenizer);
        const auto texts = read_texts(o->input);
        const std::string id = o->corpus_id.empty() ? fs::path(o->input).stem().string() : o->corpus_id;
        const auto report = tok::fertility(model, texts, o->sample_size, o->seed, id);
        ctx.emit(o->output, io::to_pretty(json(report)));
      };
    });
  }
}

// ---------------------------------------------------------------- embed

void add_embed(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* embed = app.add_subcommand("embed", "Embedding matrix expansion");
  embed->require_subcommand(1);
  auto* cmd = embed->add_subcommand("expand", "Grow an embedding matrix to a merged vocabulary");
  struct Opts {
    std::string matrix, original, merged, output, mode = "averaged";
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--matrix", o->matrix, "EMB1 matrix for the original vocabulary")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--original-tokenizer", o->original)->required()->check(CLI::ExistingFile);
  cmd->add_option("--merged-tokenizer", o->merged)->required()->check(CLI::ExistingFile);
  cmd->add_option("--mode", o->mode)
      ->check(CLI::IsMember({"averaged", "random"}))
      ->capture_default_str();
  cmd->add_option("--seed", o->seed)->capture_default_str();
  cmd->add_option("--output", o->output)->required();
  cmd->callback([&ctx, &action, o] {
    action = [&ctx, o] {
      check_output(o->output);
      const auto original = embed::load_matrix(o->matrix);
      const auto orig_tok = tok::TokenizerModel::load(o->original);
      const auto merged_tok = tok::TokenizerModel::load(o->merged);
      const auto out = embed::expand_embeddings(original, orig_tok, merged_tok,
                                                embed::parse_init_mode(o->mode), o->seed);
      embed::save_matrix(out, o->output);
      ctx.log("expanded " + std::to_string(original.rows) + " rows to " + std::to_string(out.rows));
    };
  });
}

// ---------------------------------------------------------------- corpus

void add_corpus(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* corpus = app.add_subcommand("corpus", "Pretraining corpus filtering");
  corpus->require_subcommand(1);
  auto* cmd = corpus->add_subcommand("filter", "Language, length, URL, stopword and exact-duplicate filters");
  struct Opts {
    std::string input, output, report, stopwords;
    std::size_t min_words = 30;
    double lang_threshold = 0.95;
    double max_stopword_ratio = 0.7;
    bool no_stopword_filter = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--input", o->input, "JSONL documents")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output", o->output, "Kept documents (JSONL)")->required();
  cmd->add_option("--report", o->report, "Filter report (default: stdout)");
  cmd->add_option("--min-words", o->min_words)->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--lang-threshold", o->lang_threshold)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--max-stopword-ratio", o->max_stopword_ratio)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_flag("--no-stopword-filter", o->no_stopword_filter, "Disable the stopword-ratio rule");
  cmd->add_option("--stopwords", o->stopwords, "Word list, one per line (default: built-in)")
      ->check(CLI::ExistingFile);
  cmd->callback([&ctx, &action, o] {
    action = [&ctx, o] {
      check_outputs({&o->output, &o->report});
      corpus::PipelineOptions opts;
      opts.lang_threshold = o->lang_threshold;
      opts.min_words = o->min_words;
      opts.max_stopword_ratio =
          o->no_stopword_filter ? std::nullopt : std::optional<double>(o->max_stopword_ratio);
      opts.stopwords = load_stopwords(o->stopwords);
      if (opts.max_stopword_ratio && opts.stopwords.empty()) {
        throw ValidationError("the stopword rule needs a non-empty stopword list");
      }
      const auto docs = io::read_records<corpus::Document>(o->input);
      const auto result = corpus::run_pipeline(docs, opts);
      io::write_file_atomic(o->output, io::records_to_jsonl(result.kept));
      ctx.emit(o->report, io::to_pretty(json(result.report)));
    };
  });
}

// ---------------------------------------------------------------- mixture

void add_mixture(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* mix = app.add_subcommand("mixture", "Data-mixture planning");
  mix->require_subcommand(1);

  {
    auto* cmd = mix->add_subcommand("plan", "Per-source weights, target tokens and epochs");
    struct Opts {
      std::string sources, output, total, lang, domain;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--sources", o->sources, "Source specs (JSON array or JSONL)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--total-tokens", o->total, "Token budget, e.g. 1.2e12")->required();
    cmd->add_option("--lang", o->lang, "Language targets, e.g. ar=0.45,en=0.55")->required();
    cmd->add_option("--domain", o->domain, "Domain targets, e.g. web=0.5,books=0.5");
    cmd->add_option("--output", o->output, "JSON plan (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto total = parse_token_count(o->total);
        const auto lang = parse_shares(o->lang, "--lang");
        std::optional<mixture::Targets> domain;
        if (!o->domain.empty()) domain = parse_shares(o->domain, "--domain");
        const auto sources = read_sources(o->sources);
        const auto plan = mixture::plan_mixture(sources, lang, domain, total);
        ctx.emit(o->output, io::to_pretty(json(plan)));
      };
    });
  }

  {
    auto* cmd = mix->add_subcommand("grid", "One plan per Arabic/English ratio");
    struct Opts {
      std::string sources, output, total;
      std::vector<std::string> ratios;
      std::string arabic = "ar", english = "en";
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--sources", o->sources)->required()->check(CLI::ExistingFile);
    cmd->add_option("--total-tokens", o->total)->required();
    cmd->add_option("--ratio", o->ratios, "Arabic:English pair, e.g. 0.45:0.55 (repeatable)")
        ->required()
        ->delimiter(',');
    cmd->add_option("--arabic-code", o->arabic)->capture_default_str();
    cmd->add_option("--english-code", o->english)->capture_default_str();
    cmd->add_option("--output", o->output, "JSON array of plans (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto total = parse_token_count(o->total);
        std::vector<mixture::LanguageRatio> ratios;
        for (const auto& r : o->ratios) {
          const auto colon = r.find(':');
          try {
            if (colon == std::string::npos) throw std::invalid_argument("colon");
            ratios.push_back({std::stod(r.substr(0, colon)), std::stod(r.substr(colon + 1))});
          } catch (const std::exception&) {
            throw ValidationError("--ratio: expected arabic:english, got '" + r + "'");
          }
        }
        const auto sources = read_sources(o->sources);
        const auto plans = mixture::plan_grid(sources, ratios, total, o->arabic, o->english);
        ctx.emit(o->output, io::to_pretty(json(plans)));
      };
    });
  }

  {
    auto* cmd = mix->add_subcommand("verify", "Compare sampled token counts with a plan");
    struct Opts {
      std::string plan, counts, output;
      double tolerance = 0.005;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--plan", o->plan)->required()->check(CLI::ExistingFile);
    cmd->add_option("--counts", o->counts, "JSON object: source name -> sampled tokens")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--tolerance", o->tolerance, "Largest allowed share deviation")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--output", o->output, "JSON report (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto plan = io::read_json_file<mixture::MixturePlan>(o->plan);
        const auto counts = io::read_json_file<std::map<std::string, std::uint64_t>>(o->counts);
        const auto report = mixture::verify_manifest(plan, counts, o->tolerance);
        ctx.emit(o->output, io::to_pretty(json(report)));
        if (!report.passed) throw CheckFailed("manifest deviates from the plan beyond tolerance");
      };
    });
  }
}

// ---------------------------------------------------------------- sft

void add_sft(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* sft = app.add_subcommand("sft", "SFT data quality, dedup, noise flags and turn augmentation");
  sft->require_subcommand(1);

  {
    auto* cmd = sft->add_subcommand("metrics", "Word counts, lexical diversity and turn histogram");
    struct Opts {
      std::string input, output, stopwords;
      bool no_stopwords = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input, "JSONL conversations")->required()->check(CLI::ExistingFile);
    cmd->add_option("--stopwords", o->stopwords, "Word list (default: built-in)")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--no-stopwords", o->no_stopwords, "Use an empty stopword list");
    cmd->add_option("--output", o->output, "JSON report (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const text::Lexicon stop = o->no_stopwords ? text::Lexicon() : load_stopwords(o->stopwords);
        const auto samples = io::read_records<sft::SftSample>(o->input);
        const auto report = sft::quality_metrics(samples, stop);
        ctx.emit(o->output, io::to_pretty(json(report)));
      };
    });
  }

  {
    auto* cmd = sft->add_subcommand("dedup", "Drop exact and near-exact duplicate conversations");
    struct Opts {
      std::string input, output, dropped, mode = "normalized_exact";
      double threshold = 0.9;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input)->required()->check(CLI::ExistingFile);
    cmd->add_option("--output", o->output, "Kept conversations (JSONL)")->required();
    cmd->add_option("--dropped", o->dropped, "Dropped ids as JSON (default: stdout)");
    cmd->add_option("--mode", o->mode)
        ->check(CLI::IsMember({"normalized_exact", "ngram_jaccard"}))
        ->capture_default_str();
    cmd->add_option("--threshold", o->threshold, "Jaccard threshold for ngram_jaccard")
        ->capture_default_str();
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_outputs({&o->output, &o->dropped});
        const auto samples = io::read_records<sft::SftSample>(o->input);
        const auto result = sft::dedup_near(samples, sft::parse_dedup_mode(o->mode), o->threshold);
        io::write_file_atomic(o->output, io::records_to_jsonl(result.kept));
        ctx.emit(o->dropped, io::to_pretty(json{{"dropped_ids", result.dropped_ids}}));
      };
    });
  }

  {
    auto* cmd = sft->add_subcommand("flag", "Flag noisy samples by rule");
    struct Opts {
      std::string input, output;
      std::vector<std::string> rules{sft::noise::empty_response, sft::noise::role_violation,
                                     sft::noise::unbalanced_markup};
      std::size_t max_bracket_imbalance = 0;
      double percentile = 0.99;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input)->required()->check(CLI::ExistingFile);
    cmd->add_option("--rules", o->rules, "Enabled rules")
        ->delimiter(',')
        ->check(CLI::IsMember({sft::noise::empty_response, sft::noise::role_violation,
                               sft::noise::unbalanced_markup, sft::noise::length_outlier}))
        ->capture_default_str();
    cmd->add_option("--max-bracket-imbalance", o->max_bracket_imbalance)->capture_default_str();
    cmd->add_option("--length-percentile", o->percentile)
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--output", o->output, "JSON map rule -> ids (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        auto on = [&](const char* r) {
          return std::find(o->rules.begin(), o->rules.end(), r) != o->rules.end();
        };
        sft::NoiseRules rules;
        rules.empty_response = on(sft::noise::empty_response);
        rules.role_violation = on(sft::noise::role_violation);
        rules.unbalanced_markup = on(sft::noise::unbalanced_markup);
        rules.length_outlier = on(sft::noise::length_outlier);
        rules.max_bracket_imbalance = o->max_bracket_imbalance;
        rules.length_percentile = o->percentile;
        const auto samples = io::read_records<sft::SftSample>(o->input);
        ctx.emit(o->output, io::to_pretty(json(sft::flag_noise(samples, rules))));
      };
    });
  }

  {
    auto* cmd = sft->add_subcommand("augment", "Expand conversations into per-turn masked samples");
    struct Opts {
      std::string input, tokenizer, tmpl, output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input)->required()->check(CLI::ExistingFile);
    cmd->add_option("--tokenizer", o->tokenizer)->required()->check(CLI::ExistingFile);
    cmd->add_option("--template", o->tmpl, "Chat template JSON (default: built-in)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--output", o->output, "JSONL training samples")->required();
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto tmpl =
            o->tmpl.empty() ? sft::ChatTemplate{} : io::read_json_file<sft::ChatTemplate>(o->tmpl);
        const auto tokenizer = tok::TokenizerModel::load(o->tokenizer);
        sft::check_template(tmpl, tokenizer);
        const auto samples = io::read_records<sft::SftSample>(o->input);
        std::string lines;
        std::size_t produced = 0;
        for (const auto& s : samples) {
          for (const auto& t : sft::augment_turns(s, tmpl, tokenizer)) {
            lines += json(t).dump();
            lines.push_back('\n');
            ++produced;
          }
        }
        io::write_file_atomic(o->output, lines);
        ctx.log("wrote " + std::to_string(produced) + " samples");
      };
    });
  }
}

// ---------------------------------------------------------------- pref

void add_pref(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* pref = app.add_subcommand("pref", "Preference triplet construction and audit");
  pref->require_subcommand(1);

  {
    auto* cmd = pref->add_subcommand("build", "Build filtered (prompt, chosen, rejected) triplets");
    struct Opts {
      std::string input, output, report;
      std::size_t max_bracket_imbalance = 0;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input, "JSONL seeds")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output", o->output, "JSONL triplets")->required();
    cmd->add_option("--report", o->report, "JSON filter report (default: stdout)");
    cmd->add_option("--max-bracket-imbalance", o->max_bracket_imbalance)->capture_default_str();
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_outputs({&o->output, &o->report});
        const auto seeds = io::read_records<pref::PrefSeed>(o->input);
        const auto result = pref::build_triplets(seeds, {o->max_bracket_imbalance});
        io::write_file_atomic(o->output, io::records_to_jsonl(result.triplets));
        json report = result.report;
        report["seeds_without_triplets"] = result.seeds_without_triplets;
        ctx.emit(o->report, io::to_pretty(report));
      };
    });
  }

  {
    auto* cmd = pref->add_subcommand("audit", "Re-validate built triplets");
    struct Opts {
      std::string input, output;
      double tolerance = 0.001;
      std::size_t max_bracket_imbalance = 0;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input, "JSONL triplets")->required()->check(CLI::ExistingFile);
    cmd->add_option("--tolerance", o->tolerance, "Largest allowed flagged fraction")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--max-bracket-imbalance", o->max_bracket_imbalance)->capture_default_str();
    cmd->add_option("--output", o->output, "JSON report (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto triplets = io::read_records<pref::PrefTriplet>(o->input);
        const auto report = pref::audit_noise(triplets, o->tolerance, {o->max_bracket_imbalance});
        ctx.emit(o->output, io::to_pretty(json(report)));
        if (!report.passed) {
          throw CheckFailed(std::to_string(report.flagged) + " of " + std::to_string(report.total) +
                            " triplets flagged, above tolerance");
        }
      };
    });
  }
}

// ---------------------------------------------------------------- arena

void add_arena(CLI::App& app, Context& ctx, std::function<void()>& action) {
  auto* arena = app.add_subcommand("arena", "Human-vote aggregation, win rates and ELO");
  arena->require_subcommand(1);

  {
    auto* cmd = arena->add_subcommand("aggregate", "Majority-vote raw verdicts into matches");
    struct Opts {
      std::string input, output, pending;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input, "JSONL votes")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output", o->output, "JSONL matches")->required();
    cmd->add_option("--pending", o->pending, "JSONL groups awaiting a fourth vote (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_outputs({&o->output, &o->pending});
        const auto votes = io::read_records<arena::VoteRecord>(o->input);
        const auto result = arena::aggregate_votes(votes);
        io::write_file_atomic(o->output, io::records_to_jsonl(result.matches));
        ctx.emit(o->pending, io::records_to_jsonl(result.pending));
        ctx.log(std::to_string(result.matches.size()) + " matches, " +
                std::to_string(result.pending.size()) + " pending");
      };
    });
  }

  {
    auto* cmd = arena->add_subcommand("winrates", "Pairwise win/loss/tie/both-bad fractions");
    struct Opts {
      std::string input, output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input, "JSONL matches")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output", o->output, "JSON matrix (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto matches = io::read_records<arena::MatchResult>(o->input);
        ctx.emit(o->output, io::to_pretty(arena::win_rates_to_json(arena::win_rates(matches))));
      };
    });
  }

  {
    auto* cmd = arena->add_subcommand("elo", "ELO ratings averaged over seeded match orderings");
    struct Opts {
      std::string input, output, config = "default";
      double k = 32.0, initial = 1000.0;
      std::size_t permutations = 100;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--input", o->input, "JSONL matches")->required()->check(CLI::ExistingFile);
    cmd->add_option("--config", o->config, "Scoring of both_bad outcomes")
        ->check(CLI::IsMember({"default", "custom"}))
        ->capture_default_str();
    cmd->add_option("--k", o->k, "K factor")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--initial", o->initial)->capture_default_str();
    cmd->add_option("--permutations", o->permutations)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", o->seed)->capture_default_str();
    cmd->add_option("--output", o->output, "JSON ratings (default: stdout)");
    cmd->callback([&ctx, &action, o] {
      action = [&ctx, o] {
        check_output(o->output);
        const auto matches = io::read_records<arena::MatchResult>(o->input);
        arena::EloOptions opts{arena::parse_elo_config(o->config), o->k, o->initial,
                               o->permutations, o->seed};
        ctx.emit(o->output, io::to_pretty(json(arena::elo_scores(matches, opts))));
      };
    });
  }
}

std::string error_record(const char* kind, const std::string& message) {
  return json{{"error", kind}, {"message", message}}.dump(-1, ' ', false,
                                                          json::error_handler_t::replace);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Language-expansion data toolkit", "lexpand"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file supplying option values");
  Context ctx{out, err};
  app.add_flag("-v,--verbose", ctx.verbose, "Log progress to stderr");

  std::function<void()> action;
  add_tok(app, ctx, action);
  add_embed(app, ctx, action);
  add_corpus(app, ctx, action);
  add_mixture(app, ctx, action);
  add_sft(app, ctx, action);
  add_pref(app, ctx, action);
  add_arena(app, ctx, action);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_record("validation", e.what()) << '\n';
    const CLI::App* scope = &app;
    while (true) {
      const auto subs = scope->get_subcommands();
      if (subs.empty()) break;
      scope = subs.front();
    }
    out << scope->help();
    return kValidation;
  } catch (const Error& e) {
    err << error_record(e.kind() == ErrorKind::data ? "data" : "validation", e.what()) << '\n';
    return e.kind() == ErrorKind::data ? kData : kValidation;
  }

  try {
    if (action) action();
  } catch (const CheckFailed& e) {
    err << error_record("check_failed", e.what()) << '\n';
    return kData;
  } catch (const Error& e) {
    err << error_record(e.kind() == ErrorKind::data ? "data" : "validation", e.what()) << '\n';
    return e.kind() == ErrorKind::data ? kData : kValidation;
  } catch (const std::exception& e) {
    err << error_record("data", e.what()) << '\n';
    return kData;
  }
  return kOk;
}

}  // namespace lexpand::cli
