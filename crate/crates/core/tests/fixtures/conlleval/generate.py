"""Regenerates the conlleval differential fixtures.

Writes randomized combined-format files (token, optional POS, gold, pred)
under files/ and the reference scores computed by the `conlleval` package
(a Python port of conlleval.pl, `pip install conlleval==0.2`) to
expected.json.

    python3 generate.py
"""

import json
import os
import random

import conlleval

HERE = os.path.dirname(os.path.abspath(__file__))
SCHEMES = ["IOB1", "IOB2", "BIOES"]
TYPES = ["PER", "LOC", "ORG", "MISC", "WORK-OF-ART"]
WORDS = ["EU", "rejects", "German", "call", "to", "boycott", "British", "lamb", "Peter",
         "Blackburn", "BRUSSELS", "the", "of", "Boston", "boston", "UK", "."]
FILES_PER_SCHEME = 40


def random_spans(rng, length):
    spans, i = [], 0
    while i < length:
        if rng.random() < 0.35:
            end = min(length, i + rng.randint(1, 3))
            spans.append((i, end, rng.choice(TYPES)))
            i = end
            # Adjacent same-type chunks exercise IOB1's B.
            if rng.random() < 0.3 and i < length:
                end = min(length, i + rng.randint(1, 2))
                spans.append((i, end, spans[-1][2]))
                i = end
        else:
            i += 1
    return spans


def encode(spans, length, scheme):
    tags = ["O"] * length
    prev = None
    for start, end, t in spans:
        glued = prev is not None and prev[1] == start and prev[2] == t
        if scheme == "IOB1":
            tags[start] = ("B-" if glued else "I-") + t
            for k in range(start + 1, end):
                tags[k] = "I-" + t
        elif scheme == "IOB2":
            tags[start] = "B-" + t
            for k in range(start + 1, end):
                tags[k] = "I-" + t
        else:
            if end - start == 1:
                tags[start] = "S-" + t
            else:
                tags[start] = "B-" + t
                for k in range(start + 1, end - 1):
                    tags[k] = "I-" + t
                tags[end - 1] = "E-" + t
        prev = (start, end, t)
    return tags


def perturb(rng, spans, length):
    out = []
    for start, end, t in spans:
        r = rng.random()
        if r < 0.1:
            continue
        if r < 0.2:
            t = rng.choice(TYPES)
        elif r < 0.3 and end - start > 1:
            end -= 1
        out.append((start, end, t))
    # Spurious single-token chunks on free positions.
    taken = set(k for s, e, _ in out for k in range(s, e))
    for k in range(length):
        if k not in taken and rng.random() < 0.05:
            out.append((k, k + 1, rng.choice(TYPES)))
    out.sort()
    return out


def corrupt(rng, tags, scheme):
    """Random tag edits that need conlleval's repair rules."""
    flags = "BI" if scheme != "BIOES" else "BIES"
    tags = list(tags)
    for k in range(len(tags)):
        if rng.random() < 0.12:
            if rng.random() < 0.2:
                tags[k] = "O"
            else:
                tags[k] = rng.choice(flags) + "-" + rng.choice(TYPES)
    return tags


def make_file(rng, scheme):
    pos = rng.random() < 0.5
    lines = []
    if rng.random() < 0.5:
        lines.append(" ".join(["-DOCSTART-"] + (["-X-"] if pos else []) + ["O", "O"]))
        lines.append("")
    for _ in range(rng.randint(1, 10)):
        if rng.random() < 0.1 and lines and lines[-1] == "":
            lines.append(" ".join(["-DOCSTART-"] + (["-X-"] if pos else []) + ["O", "O"]))
            lines.append("")
        length = rng.randint(1, 14)
        gold_spans = random_spans(rng, length)
        gold = encode(gold_spans, length, scheme)
        pred = encode(perturb(rng, gold_spans, length), length, scheme)
        if rng.random() < 0.6:
            gold = corrupt(rng, gold, scheme)
        if rng.random() < 0.8:
            pred = corrupt(rng, pred, scheme)
        for k in range(length):
            cols = [rng.choice(WORDS)] + (["NN"] if pos else []) + [gold[k], pred[k]]
            lines.append(" ".join(cols))
        lines.append("")
    return "\n".join(lines) + "\n"


def metrics(correct, pred, gold):
    # conlleval.pl: zero denominators give 0.
    p = 100.0 * correct / pred if pred > 0 else 0.0
    r = 100.0 * correct / gold if gold > 0 else 0.0
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return {"gold": gold, "pred": pred, "correct": correct, "precision": p, "recall": r, "f1": f,
            "display": ["%.2f" % p, "%.2f" % r, "%.2f" % f]}


def main():
    rng = random.Random(20210611)
    os.makedirs(os.path.join(HERE, "files"), exist_ok=True)
    expected = []
    for scheme in SCHEMES:
        for i in range(FILES_PER_SCHEME):
            name = "%s_%03d.txt" % (scheme.lower(), i)
            text = make_file(rng, scheme)
            with open(os.path.join(HERE, "files", name), "w") as fh:
                fh.write(text)
            res = conlleval.evaluate(text.splitlines())
            overall = res["overall"]["chunks"]["stats"]
            types = {}
            for t, v in sorted(res["slots"]["chunks"].items()):
                s = v["stats"]
                types[t] = metrics(s["correct"], s["pred"], s["gold"])
            expected.append({
                "file": name,
                "scheme": scheme,
                "overall": metrics(overall["correct"], overall["pred"], overall["gold"]),
                "types": types,
            })
    with open(os.path.join(HERE, "expected.json"), "w") as fh:
        json.dump(expected, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
