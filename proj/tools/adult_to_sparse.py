#!/usr/bin/env python3
"""Binarise the UCI Adult census file into 123 sparse 0/1 features.

Continuous columns become 5 bins with roughly equal counts (capital gain and
loss become zero / nonzero), categorical columns become one-hot blocks in the
order listed in adult.names. Missing values ("?") produce no feature.
Label is +1 for ">50K", -1 otherwise.

    python3 tools/adult_to_sparse.py adult.data > data/adult/adult.txt
"""

import argparse
import bisect
import csv
import sys
from collections import Counter

CATEGORIES = {
    "workclass": "Private, Self-emp-not-inc, Self-emp-inc, Federal-gov, Local-gov, State-gov, Without-pay, Never-worked",
    "education": "Bachelors, Some-college, 11th, HS-grad, Prof-school, Assoc-acdm, Assoc-voc, 9th, 7th-8th, 12th, "
    "Masters, 1st-4th, 10th, Doctorate, 5th-6th, Preschool",
    "marital-status": "Married-civ-spouse, Divorced, Never-married, Separated, Widowed, Married-spouse-absent, "
    "Married-AF-spouse",
    "occupation": "Tech-support, Craft-repair, Other-service, Sales, Exec-managerial, Prof-specialty, "
    "Handlers-cleaners, Machine-op-inspct, Adm-clerical, Farming-fishing, Transport-moving, Priv-house-serv, "
    "Protective-serv, Armed-Forces",
    "relationship": "Wife, Own-child, Husband, Not-in-family, Other-relative, Unmarried",
    "race": "White, Asian-Pac-Islander, Amer-Indian-Eskimo, Other, Black",
    "sex": "Female, Male",
    "native-country": "United-States, Cambodia, England, Puerto-Rico, Canada, Germany, Outlying-US(Guam-USVI-etc), "
    "India, Japan, Greece, South, China, Cuba, Iran, Honduras, Philippines, Italy, Poland, Jamaica, Vietnam, Mexico, "
    "Portugal, Ireland, France, Dominican-Republic, Laos, Ecuador, Taiwan, Haiti, Columbia, Hungary, Guatemala, "
    "Nicaragua, Scotland, Thailand, Yugoslavia, El-Salvador, Trinadad&Tobago, Peru, Hong, Holand-Netherlands",
}

# (column, kind); kind is "quantile", "nonzero" or "category".
COLUMNS = [
    ("age", "quantile"),
    ("workclass", "category"),
    ("fnlwgt", "quantile"),
    ("education", "category"),
    ("education-num", "quantile"),
    ("marital-status", "category"),
    ("occupation", "category"),
    ("relationship", "category"),
    ("race", "category"),
    ("sex", "category"),
    ("capital-gain", "nonzero"),
    ("capital-loss", "nonzero"),
    ("hours-per-week", "quantile"),
    ("native-country", "category"),
]
BINS = 5


def cut_points(values, bins=BINS):
    """Lower edges of bins 2..bins, chosen among distinct values so bins hold roughly equal counts."""
    counts = sorted(Counter(values).items())
    total = len(values)
    below = []  # (value, number of samples strictly below it)
    running = 0
    for v, c in counts:
        below.append((v, running))
        running += c
    edges = []
    for k in range(1, bins):
        target = k * total / bins
        candidates = [(abs(n - target), v) for v, n in below if n > 0 and (not edges or v > edges[-1])]
        if not candidates:
            break
        edges.append(min(candidates)[1])
    return edges


def read_rows(path):
    with open(path, newline="") as f:
        for row in csv.reader(f, skipinitialspace=True):
            if len(row) != 15:
                continue
            yield [x.strip() for x in row]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("raw", help="adult.data")
    ap.add_argument("--cuts-from", help="compute the bin edges from this file instead (e.g. the training file)")
    args = ap.parse_args()

    rows = list(read_rows(args.raw))
    ref = list(read_rows(args.cuts_from)) if args.cuts_from else rows

    encoders = []
    offset = 1
    for col, (name, kind) in enumerate(COLUMNS):
        if kind == "quantile":
            edges = cut_points([float(r[col]) for r in ref if r[col] != "?"])
            if len(edges) != BINS - 1:
                sys.exit(f"could not form {BINS} bins for {name}")
            encoders.append((col, kind, offset, edges))
            offset += BINS
        elif kind == "nonzero":
            encoders.append((col, kind, offset, None))
            offset += 2
        else:
            levels = {v.strip(): i for i, v in enumerate(CATEGORIES[name].split(","))}
            encoders.append((col, kind, offset, levels))
            offset += len(levels)
    assert offset - 1 == 123, offset

    out = sys.stdout
    for r in rows:
        label = "+1" if r[14].rstrip(".") == ">50K" else "-1"
        feats = []
        for col, kind, base, spec in encoders:
            v = r[col]
            if v == "?":
                continue
            if kind == "quantile":
                feats.append(base + bisect.bisect_right(spec, float(v)))
            elif kind == "nonzero":
                feats.append(base + (float(v) != 0.0))
            else:
                if v not in spec:
                    sys.exit(f"unknown {COLUMNS[col][0]} value {v!r}")
                feats.append(base + spec[v])
        out.write(label + "".join(f" {i}:1" for i in feats) + "\n")


if __name__ == "__main__":
    main()
