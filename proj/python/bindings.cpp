// SPDX-License-Identifier: Apache-2.0
// Record-shaped inputs and outputs cross the boundary as JSON text; the
// package's __init__ turns them into plain Python objects.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lexpand/arena.hpp"
#include "lexpand/corpus_filter.hpp"
#include "lexpand/embedding.hpp"
#include "lexpand/formats.hpp"
#include "lexpand/mixture.hpp"
#include "lexpand/preference.hpp"
#include "lexpand/sft_quality.hpp"
#include "lexpand/tokenizer.hpp"
#include "lexpand/turn_augment.hpp"

namespace py = pybind11;
using namespace lexpand;
using nlohmann::json;

namespace {

template <typename T>
std::vector<T> records(const std::string& text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string(what) + ": invalid JSON: " + e.what());
  }
  return io::decode<std::vector<T>>(j, what);
}

text::Lexicon lexicon(const std::optional<std::vector<std::string>>& words) {
  return text::Lexicon(words ? *words : text::default_stopwords());
}

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

embed::EmbeddingMatrix to_matrix(const FloatArray& a) {
  if (a.ndim() != 2) throw ValidationError("embedding matrix must be 2-D");
  embed::EmbeddingMatrix m(static_cast<std::uint32_t>(a.shape(0)), static_cast<std::uint32_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data.begin());
  return m;
}

FloatArray to_array(const embed::EmbeddingMatrix& m) {
  FloatArray out({static_cast<py::ssize_t>(m.rows), static_cast<py::ssize_t>(m.dim)});
  std::copy(m.data.begin(), m.data.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_lexpand, m) {
  m.doc() = "Native core of the lexpand toolkit";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<DataError> data_error(m, "DataError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      PyErr_SetString(validation_error.ptr(), e.what());
    } catch (const DataError& e) {
      PyErr_SetString(data_error.ptr(), e.what());
    }
  });

  py::class_<tok::TokenizerModel>(m, "Tokenizer")
      .def_static("train",
                  [](const std::vector<std::string>& corpus, std::size_t vocab_size,
                     std::vector<std::string> specials, std::size_t max_documents, std::uint64_t seed) {
                    tok::TrainOptions o{vocab_size, std::move(specials), max_documents, seed};
                    py::gil_scoped_release release;
                    return tok::train_bpe(corpus, o);
                  },
                  py::arg("corpus"), py::arg("vocab_size"), py::arg("specials") = std::vector<std::string>{},
                  py::arg("max_documents") = 0, py::arg("seed") = 0)
      .def_static("load", [](const std::string& path) { return tok::TokenizerModel::load(path); })
      .def_static("parse", [](const std::string& text) { return tok::TokenizerModel::parse(text); })
      .def("save", [](const tok::TokenizerModel& t, const std::string& path) { t.save(path); })
      .def("serialize", &tok::TokenizerModel::serialize)
      .def("encode", &tok::TokenizerModel::encode)
      .def("decode", [](const tok::TokenizerModel& t, const std::vector<tok::TokenId>& ids) {
        return t.decode(ids).text;
      })
      .def("surface", [](const tok::TokenizerModel& t, tok::TokenId id) { return py::bytes(t.surface(id)); })
      .def("find", [](const tok::TokenizerModel& t, const std::string& surface) { return t.find(surface); })
      .def("__len__", &tok::TokenizerModel::size)
      .def("__eq__", [](const tok::TokenizerModel& a, const tok::TokenizerModel& b) { return a == b; });

  m.def("merge_tokenizers", &tok::merge_tokenizers, py::arg("original"), py::arg("language_specific"));
  m.def("fertility",
        [](const tok::TokenizerModel& t, const std::vector<std::string>& corpus, std::size_t sample_size,
           std::uint64_t seed) { return tok::fertility(t, corpus, sample_size, seed).fertility; },
        py::arg("tokenizer"), py::arg("corpus"), py::arg("sample_size") = 0, py::arg("seed") = 0);

  m.def("expand_embeddings",
        [](const FloatArray& matrix, const tok::TokenizerModel& original, const tok::TokenizerModel& merged,
           const std::string& mode, std::uint64_t seed) {
          return to_array(embed::expand_embeddings(to_matrix(matrix), original, merged,
                                                   embed::parse_init_mode(mode), seed));
        },
        py::arg("matrix"), py::arg("original"), py::arg("merged"), py::arg("mode") = "averaged",
        py::arg("seed") = 0);

  m.def("_filter_corpus",
        [](const std::string& docs, double lang_threshold, std::size_t min_words,
           std::optional<double> max_stopword_ratio, const std::optional<std::vector<std::string>>& stopwords) {
          const auto in = records<corpus::Document>(docs, "documents");
          corpus::PipelineOptions o{lang_threshold, min_words, max_stopword_ratio, lexicon(stopwords)};
          const auto r = corpus::run_pipeline(in, o);
          return json{{"kept", r.kept}, {"report", r.report}}.dump();
        });

  m.def("_plan_mixture", [](const std::string& sources, const std::map<std::string, double>& language,
                            const std::optional<std::map<std::string, double>>& domain, std::uint64_t total) {
    const auto in = records<mixture::SourceSpec>(sources, "sources");
    return json(mixture::plan_mixture(in, language, domain, total)).dump();
  });

  m.def("_sft_metrics", [](const std::string& samples, const std::optional<std::vector<std::string>>& stopwords) {
    return json(sft::quality_metrics(records<sft::SftSample>(samples, "samples"), lexicon(stopwords))).dump();
  });
  m.def("_sft_dedup", [](const std::string& samples, const std::string& mode, double threshold) {
    const auto r = sft::dedup_near(records<sft::SftSample>(samples, "samples"), sft::parse_dedup_mode(mode),
                                   threshold);
    return json{{"kept", r.kept}, {"dropped_ids", r.dropped_ids}}.dump();
  });
  m.def("_sft_flag", [](const std::string& samples) {
    return json(sft::flag_noise(records<sft::SftSample>(samples, "samples"))).dump();
  });
  m.def("_augment_turns", [](const std::string& sample, const tok::TokenizerModel& t,
                             const std::optional<std::string>& tmpl) {
    const auto s = io::decode<sft::SftSample>(json::parse(sample), "conversation");
    const auto ct = tmpl ? io::decode<sft::ChatTemplate>(json::parse(*tmpl), "template") : sft::ChatTemplate{};
    return json(sft::augment_turns(s, ct, t)).dump();
  });

  m.def("_build_triplets", [](const std::string& seeds) {
    const auto r = pref::build_triplets(records<pref::PrefSeed>(seeds, "seeds"));
    return json{{"triplets", r.triplets}, {"report", r.report}, {"seeds_without_triplets", r.seeds_without_triplets}}
        .dump();
  });
  m.def("_audit_noise", [](const std::string& triplets, double tolerance) {
    return json(pref::audit_noise(records<pref::PrefTriplet>(triplets, "triplets"), tolerance)).dump();
  });

  m.def("_aggregate_votes", [](const std::string& votes) {
    const auto r = arena::aggregate_votes(records<arena::VoteRecord>(votes, "votes"));
    return json{{"matches", r.matches}, {"pending", r.pending}}.dump();
  });
  m.def("_win_rates", [](const std::string& matches) {
    return arena::win_rates_to_json(arena::win_rates(records<arena::MatchResult>(matches, "matches"))).dump();
  });
  m.def("_elo_scores", [](const std::string& matches, const std::string& config, double k, double initial,
                          std::size_t permutations, std::uint64_t seed) {
    const auto in = records<arena::MatchResult>(matches, "matches");
    arena::EloOptions o{arena::parse_elo_config(config), k, initial, permutations, seed};
    return json(arena::elo_scores(in, o)).dump();
  });
}
