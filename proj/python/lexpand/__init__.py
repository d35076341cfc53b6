# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the lexpand language-expansion toolkit.

Records are plain dicts and lists shaped like the JSONL files the CLI reads
and writes.
"""

import json as _json

from ._lexpand import (
    DataError,
    Tokenizer,
    ValidationError,
    expand_embeddings,
    fertility,
    merge_tokenizers,
)
from . import _lexpand as _native

__all__ = [
    "DataError",
    "Tokenizer",
    "ValidationError",
    "aggregate_votes",
    "audit_noise",
    "augment_turns",
    "build_triplets",
    "elo_scores",
    "expand_embeddings",
    "fertility",
    "filter_corpus",
    "flag_noise",
    "merge_tokenizers",
    "plan_mixture",
    "sft_dedup",
    "sft_metrics",
    "win_rates",
]


def _dump(obj):
    return _json.dumps(obj, ensure_ascii=False)


def filter_corpus(docs, lang_threshold=0.95, min_words=30, max_stopword_ratio=0.7, stopwords=None):
    """Returns (kept documents, report)."""
    out = _json.loads(_native._filter_corpus(_dump(list(docs)), lang_threshold, min_words,
                                             max_stopword_ratio, stopwords))
    return out["kept"], out["report"]


def plan_mixture(sources, language_targets, total_tokens, domain_targets=None):
    return _json.loads(_native._plan_mixture(_dump(list(sources)), language_targets,
                                             domain_targets, int(total_tokens)))


def sft_metrics(samples, stopwords=None):
    return _json.loads(_native._sft_metrics(_dump(list(samples)), stopwords))


def sft_dedup(samples, mode="normalized_exact", threshold=0.9):
    """Returns (kept samples, dropped ids)."""
    out = _json.loads(_native._sft_dedup(_dump(list(samples)), mode, threshold))
    return out["kept"], out["dropped_ids"]


def flag_noise(samples):
    return _json.loads(_native._sft_flag(_dump(list(samples))))


def augment_turns(sample, tokenizer, template=None):
    tmpl = None if template is None else _dump(template)
    return _json.loads(_native._augment_turns(_dump(sample), tokenizer, tmpl))


def build_triplets(seeds):
    return _json.loads(_native._build_triplets(_dump(list(seeds))))


def audit_noise(triplets, tolerance=0.001):
    return _json.loads(_native._audit_noise(_dump(list(triplets)), tolerance))


def aggregate_votes(votes):
    """Returns (matches, pending groups)."""
    out = _json.loads(_native._aggregate_votes(_dump(list(votes))))
    return out["matches"], out["pending"]


def win_rates(matches):
    return _json.loads(_native._win_rates(_dump(list(matches))))


def elo_scores(matches, config="default", k_factor=32.0, initial=1000.0, permutations=100, seed=0):
    return _json.loads(_native._elo_scores(_dump(list(matches)), config, k_factor, initial,
                                           permutations, seed))
