#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Independent computation of the SFT metrics for fixtures/sft_20.jsonl.

The printed values are pinned in unit/test_sft_quality.cpp and the
acceptance suite."""

import json
import sys
import unicodedata
from pathlib import Path

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def fold(word):
    w = unicodedata.normalize("NFKC", word).casefold()
    w = unicodedata.normalize("NFKC", w)
    while w and unicodedata.category(w[0]).startswith("P"):
        w = w[1:]
    while w and unicodedata.category(w[-1]).startswith("P"):
        w = w[:-1]
    return w


def main(name="sft_20.jsonl"):
    stop = {fold(w) for w in (FIX / "sft_stopwords.txt").read_text(encoding="utf-8").split()}
    samples = [json.loads(l) for l in (FIX / name).read_text(encoding="utf-8").splitlines() if l.strip()]
    totals = {"user": 0, "assistant": 0}
    content = {"user": [], "assistant": []}
    hist = {}
    for s in samples:
        for role in ("user", "assistant"):
            text = "\n".join(t["text"] for t in s["conversation"] if t["role"] == role)
            words = text.split()
            totals[role] += len(words)
            for w in words:
                f = fold(w)
                if f and f not in stop:
                    content[role].append(f)
        k = sum(1 for t in s["conversation"] if t["role"] == "assistant")
        hist[k] = hist.get(k, 0) + 1
    n = len(samples)
    out = {
        "avg_prompt_words": totals["user"] / n,
        "avg_response_words": totals["assistant"] / n,
        "lexical_diversity_prompt": 100 * len(set(content["user"])) / len(content["user"]),
        "lexical_diversity_response": 100 * len(set(content["assistant"])) / len(content["assistant"]),
        "turn_histogram": dict(sorted(hist.items())),
    }
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main(*sys.argv[1:])
