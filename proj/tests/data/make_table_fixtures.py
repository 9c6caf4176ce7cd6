#!/usr/bin/env python3
# Copyright 2026 The rewrite-probe Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Expands the published breakdown tables into per-question outcome records.

Each table column is given as eight bin counts plus the Human = Original
subcounts (bin index = original + 2*model + 4*human). Questions are assigned
bins column by column in the same rank order, so a question that is correct
under a strict rule tends to be correct under the looser ones too. The
resulting files reproduce every column's counts and subcounts exactly.

Usage: make_table_fixtures.py OUTDIR
"""
import json
import sys
from pathlib import Path

# Printed P@1 = 1 subcounts sum to 51 against a total of 53; the two
# unaccounted Human = Original questions are placed in the all-incorrect bin.
CAST_TABLE1 = {
    "total": 173,
    "human_equals_original": 53,
    "columns": {
        "p@1=1":       ([49, 0, 2, 0, 19, 0, 48, 55],   [16, 0, 0, 0, 0, 0, 0, 37]),
        "ndcg@3>0":    ([10, 0, 0, 1, 10, 1, 63, 88],   [1, 0, 0, 0, 0, 0, 0, 52]),
        "ndcg@3>=0.5": ([55, 0, 1, 1, 25, 0, 47, 44],   [20, 0, 0, 0, 0, 0, 0, 33]),
        "ndcg@3=1":    ([154, 0, 0, 0, 4, 0, 11, 4],    [49, 0, 0, 0, 0, 0, 0, 4]),
    },
}

CANARD_TABLE2 = {
    "total": 5571,
    "human_equals_original": 666,
    "columns": {
        "span_f1>0":    ([847, 174, 19, 135, 141, 65, 226, 3964],  [136, 0, 0, 0, 0, 1, 0, 529]),
        "span_f1>=0.5": ([1855, 193, 35, 153, 288, 57, 324, 2666], [235, 0, 2, 0, 0, 1, 0, 428]),
        "span_f1=1":    ([2701, 181, 40, 120, 232, 40, 269, 1988], [332, 0, 1, 0, 0, 0, 0, 333]),
    },
}


def pattern(b):
    return "".join("✓" if b & bit else "×" for bit in (1, 2, 4))


def expand(counts):
    # Most-correct bins first so rank i means the same "strength" in every column.
    order = sorted(range(8), key=lambda b: (-(b >> 2 & 1), -bin(b).count("1"), -b))
    out = []
    for b in order:
        out += [b] * counts[b]
    return out


def build(table, prefix):
    n, same = table["total"], table["human_equals_original"]
    per_column = {}
    for key, (counts, subs) in table["columns"].items():
        assert sum(counts) == n and sum(subs) == same, key
        rest = [c - s for c, s in zip(counts, subs)]
        per_column[key] = (expand(subs), expand(rest))
    records = []
    for i in range(n):
        flag = i < same
        j = i if flag else i - same
        outcomes = {key: pattern((heo if flag else other)[j]) for key, (heo, other) in per_column.items()}
        records.append({"qid": f"{prefix}-{i + 1:05d}", "human_equals_original": flag, "outcomes": outcomes})
    return records


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)
    for name, table, prefix in (("cast_table1_outcomes.jsonl", CAST_TABLE1, "cast"),
                                ("canard_table2_outcomes.jsonl", CANARD_TABLE2, "canard")):
        with open(out / name, "w", encoding="utf-8", newline="\n") as f:
            for r in build(table, prefix):
                f.write(json.dumps(r, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
