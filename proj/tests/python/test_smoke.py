# SPDX-License-Identifier: Apache-2.0
import json
import os
from pathlib import Path

import numpy as np
import pytest

import lexpand

FIXTURES = Path(os.environ.get("LEXPAND_FIXTURES_DIR", Path(__file__).parents[1] / "fixtures"))


def read_jsonl(name):
    with open(FIXTURES / name, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


@pytest.fixture(scope="module")
def tokenizers():
    en = [d["text"] for d in read_jsonl("en_train.jsonl")[:300]]
    ar = [d["text"] for d in read_jsonl("ar_train.jsonl")[:300]]
    original = lexpand.Tokenizer.train(en, 600, ["<s>", "</s>"])
    arabic = lexpand.Tokenizer.train(ar, 600, ["<s>", "</s>"])
    return original, lexpand.merge_tokenizers(original, arabic)


def test_round_trip_and_merge(tokenizers):
    original, merged = tokenizers
    text = "hello world مرحبا بالعالم 🙂"
    assert merged.decode(merged.encode(text)) == text
    assert len(merged) > len(original)
    assert all(merged.surface(i) == original.surface(i) for i in range(len(original)))
    assert merged.find("<s>") == 0
    assert merged.find(merged.surface(300)) == 300
    assert lexpand.Tokenizer.parse(merged.serialize()) == merged
    ar_eval = [d["text"] for d in read_jsonl("ar_eval.jsonl")[:200]]
    assert lexpand.fertility(merged, ar_eval) <= lexpand.fertility(original, ar_eval)


def test_expand_embeddings(tokenizers):
    original, merged = tokenizers
    rng = np.random.default_rng(0)
    matrix = rng.normal(size=(len(original), 8)).astype(np.float32)
    out = lexpand.expand_embeddings(matrix, original, merged)
    assert out.shape == (len(merged), 8)
    assert np.array_equal(out[: len(original)], matrix)
    with pytest.raises(lexpand.ValidationError):
        lexpand.expand_embeddings(matrix[:-1], original, merged)


def test_filter_and_mixture():
    docs = read_jsonl("filter_corpus.jsonl")
    kept, report = lexpand.filter_corpus(docs)
    assert report["input_count"] == len(docs)
    assert report["kept_count"] == len(kept)
    with open(FIXTURES / "mixture_sources_coarse.json", encoding="utf-8") as f:
        sources = json.load(f)
    plan = lexpand.plan_mixture(sources, {"en": 0.55, "ar": 0.45}, 1.2e12)
    assert plan["realized_shares"]["language:ar"] == pytest.approx(0.45)


def test_sft_and_preference(tokenizers):
    _, merged = tokenizers
    samples = read_jsonl("sft_20.jsonl")
    metrics = lexpand.sft_metrics(samples)
    assert metrics["sample_count"] == 20
    kept, dropped = lexpand.sft_dedup(samples + samples[:3])
    assert len(dropped) >= 3
    convs = read_jsonl("conversations.jsonl")
    out = lexpand.augment_turns(convs[0], merged)
    assert len(out) == sum(t["role"] == "assistant" for t in convs[0]["conversation"])

    built = lexpand.build_triplets(read_jsonl("pref_seeds.jsonl"))
    assert built["triplets"]
    assert lexpand.audit_noise(built["triplets"])["passed"]
    with pytest.raises(lexpand.DataError):
        lexpand.build_triplets([{"id": "x"}])


def test_arena():
    matches, pending = lexpand.aggregate_votes(read_jsonl("votes.jsonl"))
    assert matches
    rates = lexpand.win_rates(matches)
    assert rates
    ratings = lexpand.elo_scores(matches, "custom", permutations=20, seed=7)
    assert ratings == lexpand.elo_scores(matches, "custom", permutations=20, seed=7)
    assert [r["elo"] for r in ratings] == sorted((r["elo"] for r in ratings), reverse=True)
