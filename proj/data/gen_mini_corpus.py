#!/usr/bin/env python3
"""Generate the synthetic mini-corpus used by tests and samples.

Five years (2015-2019), 40 policies per year. Each category favours a few terms and
term dynamics are planted:
biometric rises, beacons falls, cookies stays flat, dna appears in 2017
after being absent in 2016. Output is deterministic for a given seed.

    python3 gen_mini_corpus.py [--seed 7] [--out mini_corpus.jsonl]
"""

import argparse
import json
import random

YEARS = range(2015, 2020)
DOCS_PER_YEAR = 40
CATEGORIES = ["shopping", "news", "health", "finance", "social"]

OPENERS = [
    "# Privacy Policy",
    "# Our Privacy Notice",
    "Privacy Statement",
]
FILLER = [
    "This policy explains how we handle information when you use our services.",
    "We may update this policy from time to time.",
    "Please read this notice carefully.",
    "If you have questions, contact our support team.",
    "By using the site you agree to these terms.",
    "We keep information only as long as needed for the purposes described here.",
    "Our partners help us operate the service.",
]
# term -> sentence templates mentioning it
TEMPLATES = {
    "cookies": ["We use cookies to remember your preferences.", "Cookies help us measure traffic."],
    "beacons": ["Web beacons tell us when an email is opened.", "We place beacons on some pages."],
    "biometric": ["We may collect biometric identifiers for login.", "Biometric templates are stored securely."],
    "dna": ["Our genetic testing service processes dna samples.", "Raw dna files can be downloaded."],
    "address": ["We collect your postal address for shipping.", "Your address is shared with carriers."],
    "signature": ["A signature is required for some deliveries."],
    "geolocation": ["Precise geolocation helps us show nearby stores."],
    "education": ["Education history may be collected for job applications."],
    "fingerprint": ["You can unlock the app with a fingerprint."],
    "alias": ["You may post under an alias."],
    "iris": ["Some devices support iris recognition."],
    "face": ["Face recognition is optional."],
}
NEGATED = [
    "We never sell your geolocation to advertisers.",
    "We do not share your address with marketers.",
    "We don't use cookies for profiling.",
    "We will not disclose biometric data without consent.",
]
# category -> terms it mentions far more often than other categories do
FOCUS = {
    "shopping": {"address", "signature", "cookies"},
    "news": {"cookies", "beacons", "alias"},
    "health": {"dna", "biometric", "iris", "face"},
    "finance": {"signature", "fingerprint", "address"},
    "social": {"alias", "face", "geolocation", "education"},
}
TABLE = [
    "| Category | Examples |",
    "| Identifiers | address, alias |",
]


def term_weights(year):
    t = year - 2015
    return {
        "cookies": 3.0,
        "beacons": 2.5 - 0.55 * t,
        "biometric": 0.2 + 0.6 * t,
        "dna": 0.0 if year <= 2016 else 1.2,
        "address": 2.0,
        "signature": 0.6,
        "geolocation": 0.8 + 0.2 * t,
        "education": 0.4,
        "fingerprint": 0.3 + 0.2 * t,
        "alias": 0.5,
        "iris": 0.2 + 0.1 * t,
        "face": 0.3,
    }


def make_doc(rng, year, category):
    weights = term_weights(year)
    for k in weights:
        if k not in FOCUS[category]:
            weights[k] *= 0.08
    lines = [rng.choice(OPENERS), ""]
    for _ in range(rng.randint(8, 16)):
        r = rng.random()
        if r < 0.25:
            lines.append(rng.choice(FILLER))
        elif r < 0.33:
            lines.append(rng.choice(NEGATED))
        else:
            terms = [k for k, w in weights.items() if w > 0]
            term = rng.choices(terms, weights=[weights[k] for k in terms])[0]
            lines.append(rng.choice(TEMPLATES[term]))
    if rng.random() < 0.3:
        lines.append("")
        lines.extend(TABLE)
    return "\n".join(lines)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="mini_corpus.jsonl")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    with open(args.out, "w", encoding="utf-8") as f:
        n = 0
        for year in YEARS:
            for i in range(DOCS_PER_YEAR):
                category = rng.choice(CATEGORIES)
                rec = {
                    "id": f"p{year}-{i:02d}",
                    "url": f"https://site{rng.randint(1, 500)}.example/{year}/privacy",
                    "year": year,
                    "category": category,
                    "text": make_doc(rng, year, category),
                }
                f.write(json.dumps(rec, ensure_ascii=False) + "\n")
                n += 1
    print(f"wrote {n} policies to {args.out}")


if __name__ == "__main__":
    main()
