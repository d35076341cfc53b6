#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates tests/fixtures. Output is deterministic for a given Python 3."""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

ARABIC = """
في من على إلى عن مع هذا هذه ذلك التي الذي كان كانت يكون قد لقد ثم أو بين بعد قبل
حتى عند كل بعض غير لكن لأن إذا كما أيضا فقط جدا هناك هنا الآن اليوم أمس غدا
الكتاب المدرسة الجامعة الطالب المعلم البيت المدينة القرية الشارع السيارة الطريق
العمل الوقت السنة الشهر الأسبوع الصباح المساء الليل النهار الماء الشمس القمر
البحر الجبل النهر الشجرة الزهرة الحديقة الطعام الخبز القهوة الشاي السوق المال
الحكومة الوزارة الشركة المشروع التقنية الحاسوب الشبكة البيانات النموذج اللغة
العربية الإنجليزية الترجمة الكلمة الجملة النص الكتابة القراءة المعرفة العلم
التاريخ الثقافة الفن الموسيقى الرياضة الصحة الطب المستشفى الطبيب المريض الدواء
الاقتصاد السياسة المجتمع الأسرة الطفل الأم الأب الأخ الأخت الصديق الناس العالم
الأرض السماء الهواء النار الضوء اللون الصوت الحركة القوة الطاقة الكهرباء الزمن
يكتب يقرأ يذهب يأتي يعمل يدرس يتعلم يعلم يفهم يعرف يريد يحب يقول يرى يسمع يفكر
يبدأ ينتهي يستطيع يجب يمكن يحتاج يساعد يشارك يقدم يبني يطور يستخدم يحسن يغير
كتب قرأ ذهب جاء عمل درس تعلم فهم عرف أراد قال رأى سمع فكر بدأ انتهى استطاع ساعد
كبير صغير جديد قديم جميل سريع بطيء طويل قصير سهل صعب مهم مفيد واضح قوي ضعيف
أول آخر كثير قليل عظيم حديث عربي دولي محلي عام خاص علمي ثقافي اجتماعي اقتصادي
مدينة دولة منطقة مركز مجلس برنامج نظام خدمة طريقة فكرة مشكلة حل نتيجة سؤال جواب
تطوير تعليم تدريب بحث دراسة تحليل تقرير معلومات خبرة مهارة فرصة تجربة قرار خطة
الرياض جدة مكة المدينة المنورة الدمام القاهرة بغداد دمشق بيروت عمان تونس الرباط
""".split()

ENGLISH = """
the of and to in is was for on that with as by at from it this be are or an
have has had not but which their they were been one all we can there more when
will would about also into time other some what only new two may first after
people year years work world state city school student teacher book house road
car water sun moon sea mountain river tree flower garden food bread coffee tea
market money government company project technology computer network data model
language translation word sentence text writing reading knowledge science history
culture art music sport health medicine hospital doctor patient economy policy
society family child mother father brother sister friend earth sky air fire light
color sound energy power writes reads goes comes works studies learns teaches
understands knows wants loves says sees hears thinks begins ends helps builds
develops uses improves changes large small old beautiful fast slow long short easy
hard important useful clear strong weak last many few great modern local general
public private scientific cultural social economic region center council program
system service method idea problem solution result question answer training
research study analysis report information experience skill opportunity decision
plan morning evening night day week month village street garden library museum
""".split()

# Stopwords used by the SFT metrics fixture; deliberately small.
SFT_STOPWORDS = ["the", "a", "an", "of", "and", "to", "is", "in", "في", "من", "على", "و"]


def zipf_sampler(rng, words, s=1.1):
    weights = [1.0 / (i + 1) ** s for i in range(len(words))]
    order = list(words)
    rng.shuffle(order)

    def draw(n):
        return rng.choices(order, weights=weights, k=n)

    return draw


def write_jsonl(name, rows):
    with open(OUT / name, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False, sort_keys=False) + "\n")


def write_json(name, value):
    with open(OUT / name, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(value, ensure_ascii=False, indent=2) + "\n")


def make_docs(rng, words, count, lo, hi, sep_choices):
    draw = zipf_sampler(rng, words)
    docs = []
    for _ in range(count):
        n = rng.randint(lo, hi)
        toks = draw(n)
        out = []
        for i, w in enumerate(toks):
            out.append(w)
            if i + 1 < n and rng.random() < 0.08:
                out[-1] += rng.choice(sep_choices)
        docs.append(" ".join(out))
    return docs


def tokenizer_corpora():
    rng = random.Random(20240901)
    en_train = make_docs(rng, ENGLISH, 1500, 20, 60, [",", "."])
    ar_train = make_docs(rng, ARABIC, 1500, 20, 60, ["،", "."])
    en_eval = make_docs(rng, ENGLISH, 300, 20, 60, [",", "."])
    ar_eval = make_docs(rng, ARABIC, 1000, 20, 60, ["،", "."])
    for name, docs in [("en_train.jsonl", en_train), ("ar_train.jsonl", ar_train),
                       ("en_eval.jsonl", en_eval), ("ar_eval.jsonl", ar_eval)]:
        write_jsonl(name, [{"id": f"{name.split('.')[0]}-{i:04d}", "text": t}
                           for i, t in enumerate(docs)])


def filter_corpus():
    """100 documents; `planted` records the rule expected to drop each one."""
    rng = random.Random(7)
    draw_en = zipf_sampler(rng, [w for w in ENGLISH[40:]])
    draw_ar = zipf_sampler(rng, ARABIC[40:])

    def text(lang, n):
        return " ".join((draw_ar if lang == "ar" else draw_en)(n))

    docs, planted = [], {}
    plan = (["clean"] * 62 + ["lang"] * 10 + ["lang_boundary"] * 3 + ["short"] * 8 +
            ["short_boundary"] * 3 + ["dup_url"] * 6 + ["dup_text"] * 6 + ["no_url"] * 2)
    rng.shuffle(plan)
    seen_urls, seen_texts = [], []
    for i, kind in enumerate(plan):
        lang = "ar" if i % 2 == 0 else "en"
        doc = {"id": f"doc-{i:03d}", "url": f"https://example.org/{lang}/{i:03d}",
               "text": text(lang, rng.randint(35, 80)), "lang": lang,
               "lang_score": round(rng.uniform(0.951, 1.0), 3),
               "domain": rng.choice(["web", "books", "news", "wiki"]), "origin": "natural"}
        rule = None
        if kind == "lang":
            doc["lang_score"] = round(rng.uniform(0.2, 0.949), 3)
            rule = "language"
        elif kind == "lang_boundary":
            doc["lang_score"] = 0.95
        elif kind == "short":
            doc["text"] = text(lang, rng.randint(1, 29))
            rule = "short"
        elif kind == "short_boundary":
            doc["text"] = text(lang, 30)
        elif kind == "dup_url" and seen_urls:
            doc["url"] = rng.choice(seen_urls)
            rule = "duplicate_url"
        elif kind == "dup_text" and seen_texts:
            doc["text"] = rng.choice(seen_texts)
            rule = "duplicate_text"
        elif kind == "no_url":
            del doc["url"]
        if rule is None:
            if "url" in doc:
                seen_urls.append(doc["url"])
            seen_texts.append(doc["text"])
        docs.append(doc)
        planted[doc["id"]] = rule
    write_jsonl("filter_corpus.jsonl", docs)
    write_json("filter_planted.json", planted)


def sft_fixture():
    """20 conversations for the metrics check."""
    rng = random.Random(11)
    draw_en = zipf_sampler(rng, ENGLISH[:120] + ["The", "Data,", "model."])
    draw_ar = zipf_sampler(rng, ARABIC[:120])
    samples = []
    for i in range(20):
        lang = "ar" if i % 3 == 0 else "en"
        draw = draw_ar if lang == "ar" else draw_en
        turns = 1 + (i % 4 == 1) + (i % 7 == 3) * 2
        conv = []
        for _ in range(turns):
            conv.append({"role": "user", "text": " ".join(draw(rng.randint(3, 25)))})
            conv.append({"role": "assistant", "text": " ".join(draw(rng.randint(5, 60)))})
        samples.append({"id": f"sft-{i:02d}", "language": lang, "source": "fixture",
                        "conversation": conv})
    write_jsonl("sft_20.jsonl", samples)
    with open(OUT / "sft_stopwords.txt", "w", encoding="utf-8") as f:
        f.write("\n".join(SFT_STOPWORDS) + "\n")


def conversations():
    rng = random.Random(23)
    draw_en = zipf_sampler(rng, ENGLISH)
    draw_ar = zipf_sampler(rng, ARABIC)
    extras = ["", "!", "?", " 🙂", "  (see above)", " ```code```", "\n- item", "،"]
    rows = []
    for i in range(40):
        lang = "ar" if i % 2 else "en"
        draw = draw_ar if lang == "ar" else draw_en
        conv = []
        for t in range(1 + i % 4):
            for role, lo, hi in (("user", 2, 15), ("assistant", 3, 30)):
                body = " ".join(draw(rng.randint(lo, hi))) + rng.choice(extras)
                if rng.random() < 0.1:
                    body = " " + body
                conv.append({"role": role, "text": body})
        rows.append({"id": f"conv-{i:02d}", "language": lang, "source": "fixture",
                     "conversation": conv})
    write_jsonl("conversations.jsonl", rows)
    write_json("chat_template.json", {
        "bos": "<s>", "eos": "</s>",
        "role_prefixes": {"user": "User: ", "assistant": "Assistant: "},
        "eos_after_intermediate": True, "max_tokens": 8192})


def pref_seeds():
    rng = random.Random(31)
    draw = zipf_sampler(rng, ENGLISH)
    seeds = []
    for i in range(60):
        accepted = " ".join(draw(rng.randint(8, 20)))
        cands = []
        for j in range(10):
            r = rng.random()
            if r < 0.05:
                text = ""
            elif r < 0.08:
                text = accepted.upper()
            elif r < 0.11 and cands:
                text = cands[0]["text"]
            else:
                text = " ".join(draw(rng.randint(8, 20)))
            cands.append({"text": text, "temperature": round(rng.choice([0.2, 0.7, 1.0, 1.2]), 1),
                          "top_p": rng.choice([0.8, 0.9, 0.95, 1.0]),
                          "policy": "on_policy" if j % 2 == 0 else "off_policy"})
        seeds.append({"id": f"seed-{i:03d}",
                      "prompt": [{"role": "user", "text": " ".join(draw(rng.randint(4, 12)))}],
                      "accepted": accepted, "candidates": cands})
    write_jsonl("pref_seeds.jsonl", seeds)


def votes():
    rng = random.Random(43)
    models = ["alpha", "bravo", "charlie", "delta"]
    verdicts = ["a_wins", "b_wins", "tie", "both_bad"]
    rows = []
    for p in range(120):
        a, b = rng.sample(models, 2)
        picks = [rng.choice(verdicts) for _ in range(3)]
        if len(set(picks)) == 3 and p % 2 == 0:
            picks.append(rng.choice(verdicts))
        for e, v in enumerate(picks):
            # Some evaluators see the pair in the other order.
            if rng.random() < 0.3:
                flipped = {"a_wins": "b_wins", "b_wins": "a_wins"}.get(v, v)
                rows.append({"prompt_id": f"p{p:03d}", "model_a": b, "model_b": a,
                             "evaluator_id": f"ev{e}", "verdict": flipped})
            else:
                rows.append({"prompt_id": f"p{p:03d}", "model_a": a, "model_b": b,
                             "evaluator_id": f"ev{e}", "verdict": v})
    write_jsonl("votes.jsonl", rows)


def mixture_sources():
    """Domain-level sources in units of 10^9 tokens, read off the published mixture table."""
    giga = 10 ** 9
    rows = [
        ("en-web", "en", "natural", "web", 204.6), ("en-books", "en", "natural", "books", 59.4),
        ("en-science", "en", "natural", "science", 105.6),
        ("en-code", "en", "natural", "code", 257.4), ("en-math", "en", "natural", "math", 33.0),
        ("ar-nat-web", "ar", "natural", "web", 191.7),
        ("ar-nat-books", "ar", "natural", "books", 35.1),
        ("ar-nat-wiki", "ar", "natural", "wiki", 1.89),
        ("ar-nat-news", "ar", "natural", "news", 37.8),
        ("ar-nat-other", "ar", "natural", "other", 3.51),
        ("ar-tr-web", "ar", "translated", "web", 175.5),
        ("ar-tr-books", "ar", "translated", "books", 32.4),
        ("ar-tr-wiki", "ar", "translated", "wiki", 1.647),
        ("ar-tr-science", "ar", "translated", "science", 59.4),
        ("ar-tr-other", "ar", "translated", "other", 1.053),
    ]
    specs = [{"name": n, "language": l, "origin": o, "domain": d,
              "available_tokens": round(v * 1000) * (giga // 1000)} for n, l, o, d, v in rows]
    write_json("mixture_sources.json", specs)
    write_json("mixture_sources_coarse.json", [
        {"name": "en", "language": "en", "origin": "natural", "domain": "mixed",
         "available_tokens": 660 * giga},
        {"name": "ar-natural", "language": "ar", "origin": "natural", "domain": "mixed",
         "available_tokens": 270 * giga},
        {"name": "ar-translated", "language": "ar", "origin": "translated", "domain": "mixed",
         "available_tokens": 270 * giga},
    ])


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    tokenizer_corpora()
    filter_corpus()
    sft_fixture()
    conversations()
    pref_seeds()
    votes()
    mixture_sources()


if __name__ == "__main__":
    main()
