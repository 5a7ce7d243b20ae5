#!/usr/bin/env python3
"""Regenerates the synthetic suite corpus under tests/fixtures/suite/.

The corpus stands in for real model outputs: recognized transcripts, accent
logits, accent embeddings and UTMOS scores are drawn from a seeded RNG so the
harness can be exercised without any external model. Output is deterministic.

    python3 tests/fixtures/make_fixture.py
"""

import json
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "suite")

SENTENCES = [
    ("the car is far", "ðə kaɹ ɪz faɹ"),
    ("water the garden", "ˈwaɾɚ ðə ˈgaɹdən"),
    ("a bath after dinner", "ə bæθ æftɚ dɪnɚ"),
    ("the goat ate oats", "ðə goʊt eɪt oʊts"),
    ("better butter", "ˈbɛɾɚ ˈbʌɾɚ"),
    ("her first word", "hɝ fɝst wɝd"),
    ("park the car", "paɹk ðə kaɹ"),
    ("no more water", "noʊ mɔɹ waɾɚ"),
    ("the latter matter", "ðə læɾɚ mæɾɚ"),
    ("ask her for the map", "æsk hɝ fɔɹ ðə mæp"),
    ("a city of stars", "ə sɪɾi əv staɹz"),
    ("go home slowly", "goʊ hoʊm sloʊli"),
    ("the party started late", "ðə paɹɾi staɹɾɪd leɪt"),
    ("laugh at the cat", "læf æt ðə kæt"),
    ("her sister wrote a letter", "hɝ sɪstɚ ɹoʊt ə lɛɾɚ"),
    ("four hours later", "fɔɹ aʊɚz leɪɾɚ"),
    ("the dancer is fast", "ðə dænsɚ ɪz fæst"),
    ("a pretty little kitten", "ə pɹɪɾi lɪɾəl kɪʔən"),
    ("far and away", "faɹ ænd əweɪ"),
    ("over the river", "oʊvɚ ðə ɹɪvɚ"),
]

VOWELS = set("iɪeɛæaɑɒɔoʊuʌəɐɜɚɝɨᵻɵy")
MARKS = set("ːˑˈˌ")
CONSONANTS = set("pbtdkgɡʔɾfvθðszʃʒxçhmnŋlɫɹrwʍj")

# (family, source, target) for the context-free rules.
SIMPLE = [
    ("flapping", "ɾ", "t"),
    ("rhoticity", "ɚ", "ə"),
    ("rhoticity", "ɝ", "ɜ"),
    ("vowel", "æ", "ɑ"),
    ("vowel", "a", "ɑ"),
]
FAMILIES = ["flapping", "rhoticity", "vowel"]


def klass(c):
    if c == " ":
        return "boundary"
    if c in MARKS:
        return "mark"
    if c in VOWELS:
        return "vowel"
    return "consonant"


def coda_r(chars, i):
    j = i - 1
    while j >= 0 and klass(chars[j]) == "mark":
        j -= 1
    if j < 0 or klass(chars[j]) != "vowel":
        return False
    k = i + 1
    while k < len(chars) and klass(chars[k]) in ("mark", "boundary"):
        k += 1
    return k == len(chars) or klass(chars[k]) == "consonant"


def british(ipa, families):
    """Per-codepoint British target; every rule here is one codepoint wide."""
    chars = list(ipa)
    for i, c in enumerate(chars):
        for fam, src, dst in SIMPLE:
            if fam in families and c == src:
                chars[i] = dst
        if "vowel" in families and c == "o" and i + 1 < len(chars) and chars[i + 1] == "ʊ":
            chars[i] = "ə"
        if "rhoticity" in families and c == "ɹ" and coda_r(chars, i):
            chars[i] = "ː"
    return "".join(chars)


def condition_list():
    conds = [("baseline", [])]
    conds += [("plus_" + f, [f]) for f in FAMILIES]
    conds.append(("plus_all", FAMILIES))
    conds += [("minus_" + f, [g for g in FAMILIES if g != f]) for f in FAMILIES]
    return conds


def rows_for(rng, key, families, voice, keep_prob, drift_prob, logit_base, utmos_mu):
    rows = []
    full_target_shift = len(families) / 3.0
    for idx, (text, src) in enumerate(SENTENCES):
        utt = "utt%02d" % (idx + 1)
        applied = british(src, families)
        full = british(src, FAMILIES)
        heard = []
        for s, a, f in zip(src, applied, full):
            if a != s:
                heard.append(a if rng.random() < keep_prob else s)
            elif f != s:
                heard.append(f if rng.random() < drift_prob else s)
            else:
                heard.append(s)
        durations = [rng.randint(2, 12) for c in src if c != " "]
        na, b, other = logit_base
        logits = [
            round(na - 1.5 * full_target_shift + rng.gauss(0, 0.3), 4),
            round(b + 1.0 * full_target_shift + rng.gauss(0, 0.3), 4),
            round(other + rng.gauss(0, 0.3), 4),
        ]
        rows.append({
            "utt_id": utt,
            "text": text,
            "ipa_source": src,
            "durations": durations,
            "voice_label": voice,
            "recognized_ipa": "".join(heard),
            "logits": logits,
            "embedding_ref": "%s/%s" % (key, utt),
            "utmos": round(min(5.0, max(1.0, rng.gauss(utmos_mu, 0.15))), 3),
        })
    return rows


def embedding(rng, na_weight):
    na_dir = [1.0, 0.8, 0.0, 0.2, 0.0, -0.3, 0.1, 0.0]
    b_dir = [0.0, 0.1, 1.0, -0.2, 0.7, 0.0, 0.0, 0.3]
    return [round(na_weight * x + (1 - na_weight) * y + rng.gauss(0, 0.1), 5)
            for x, y in zip(na_dir, b_dir)]


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")


def main():
    rng = random.Random(20250916)
    os.makedirs(os.path.join(OUT, "b"), exist_ok=True)
    os.makedirs(os.path.join(OUT, "na"), exist_ok=True)

    embeddings = []
    for key, fams in condition_list():
        share = len(fams) / 3.0
        rows = rows_for(rng, key, fams, "bm_fable", keep_prob=0.55 + 0.1 * share,
                        drift_prob=0.25, logit_base=(0.0, 1.4, -0.6), utmos_mu=3.73)
        write_jsonl(os.path.join(OUT, "b", key + ".jsonl"), rows)
        for r in rows:
            embeddings.append({"ref": r["embedding_ref"],
                               "embedding": embedding(rng, 0.35 - 0.3 * share)})

    for key, fams in [("na_baseline", []), ("na_plus_all", FAMILIES)]:
        rows = rows_for(rng, key, fams, "af_heart", keep_prob=0.3, drift_prob=0.1,
                        logit_base=(2.2, -0.8, -0.4), utmos_mu=4.43)
        write_jsonl(os.path.join(OUT, "na", key + ".jsonl"), rows)
        for r in rows:
            embeddings.append({"ref": r["embedding_ref"],
                               "embedding": embedding(rng, 0.9 - 0.2 * len(fams) / 3.0)})

    write_jsonl(os.path.join(OUT, "embeddings.jsonl"), embeddings)
    write_jsonl(os.path.join(OUT, "reference_na.jsonl"),
                [{"ref": "na%02d" % i, "embedding": embedding(rng, 1.0)} for i in range(10)])
    write_jsonl(os.path.join(OUT, "reference_b.jsonl"),
                [{"ref": "b%02d" % i, "embedding": embedding(rng, 0.0)} for i in range(10)])

    suite = {
        "name": "fixture",
        "rules": "../../../data/rules/na_to_b.rules",
        "embeddings": "embeddings.jsonl",
        "references": {"na": "reference_na.jsonl", "b": "reference_b.jsonl"},
        "n1_mode": "full",
        "kde_grid_points": 128,
        "conditions": [
            {"name": "NA Spk Emb", "voice": "af_heart", "families": [],
             "manifest": "na/na_baseline.jsonl"},
            {"name": "NA + All", "voice": "af_heart", "families": "all",
             "manifest": "na/na_plus_all.jsonl"},
        ],
        "ablations": [
            {"name": "B Spk Emb", "voice": "bm_fable", "manifest": "b/{condition}.jsonl"},
        ],
    }
    with open(os.path.join(OUT, "suite.json"), "w", encoding="utf-8", newline="\n") as f:
        json.dump(suite, f, ensure_ascii=False, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
