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

"""Writes the small synthetic corpora used by the end-to-end tests.

retrieval/: 10 questions, three run files, qrels, triples, embeddings.
reading/:   10 questions, three span files, gold answers, triples.

Questions flagged Human = Original get byte-identical original and human run
entries, so their original and human outcomes always agree.

Usage: make_e2e_fixture.py OUTDIR
"""
import json
import random
import sys
from pathlib import Path

QUESTIONS = [
    ("q01", "When?", "When was DNA discovered?", "When was DNA discovered?"),
    ("q02", "Who found it?", "Who found the structure?", "Who found the structure of DNA?"),
    ("q03", "What is melatonin?", "What is melatonin?", "What is melatonin?"),
    ("q04", "What are good sources in food?", "What are good sources in food for melatonin",
     "What are good sources of melatonin in food?"),
    ("q05", "What about environmental factors?", "What about environmental factors that led to a breakdown of trade",
     "What about environmental factors during the Bronze Age collapse?"),
    ("q06", "Describe its subscriber growth", "Describe Netflixs subscriber growth over time",
     "Describe Netflix's subscriber growth over time"),
    ("q07", "Who are the Hamilton Electors?", "Who are the Hamilton Electors?", "Who are the Hamilton Electors?"),
    ("q08", "What were they trying to do?", "What were the electors trying to do?",
     "What were the Hamilton Electors trying to do?"),
    ("q09", "How does it work?", "How does the vaccine work?", "How does the mRNA vaccine work in the body?"),
    ("q10", "Why?", "Why did it fail?", "Why did the Bronze Age trade network fail?"),
]


def lines(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in rows:
            f.write(r + "\n")


def retrieval(out, rng):
    out.mkdir(parents=True, exist_ok=True)
    triples, qrels = [], []
    runs = {"original": [], "model": [], "human": []}
    emb = {"original": [], "model": [], "human": []}
    for idx, (qid, orig, model, human) in enumerate(QUESTIONS):
        triples.append(json.dumps({"qid": qid, "original": orig, "model_rewrite": model, "human_rewrite": human}))
        docs = [f"{qid.upper()}_D{j:02d}" for j in range(1, 13)]
        grades = [3, 2, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0]
        for d, g in zip(docs[:6], grades[:6]):
            qrels.append(f"{qid} 0 {d} {g}")
        same = orig.lower() == human.lower()
        human_order = docs[:] if idx % 3 != 2 else [docs[3]] + docs[:3] + docs[4:]
        shift = idx % 5
        model_order = human_order[shift:] + human_order[:shift] if not same else human_order[:]
        if idx in (4, 8):
            model_order = list(reversed(human_order))
        orig_order = human_order[:] if same else docs[6:] + docs[:6]
        if idx == 1:
            orig_order = human_order[:]
        for name, order in (("original", orig_order), ("model", model_order), ("human", human_order)):
            for rank, d in enumerate(order[:10], start=1):
                runs[name].append(f"{qid} Q0 {d} {rank} {20.0 - rank * 1.25:.2f} synth-{name}")
        base = [rng.uniform(-1, 1) for _ in range(8)]
        for name in emb:
            noise = 0.0 if (name == "human" or (name == "original" and same)) else rng.uniform(0.05, 0.9)
            vec = [round(b + noise * rng.uniform(-1, 1), 6) for b in base]
            emb[name].append(json.dumps({"qid": qid, "vector": vec}))
    lines(out / "triples.jsonl", triples)
    lines(out / "qrels.txt", qrels)
    for name in runs:
        lines(out / f"run_{name}.txt", runs[name])
        lines(out / f"embeddings_{name}.jsonl", emb[name])


def reading(out):
    out.mkdir(parents=True, exist_ok=True)
    gold_answers = {
        "q01": ["1869", "in 1869"], "q02": ["Watson and Crick"], "q03": ["a hormone that regulates sleep"],
        "q04": ["tart cherries, walnuts and milk"], "q05": ["drought and earthquakes"],
        "q06": ["from 20 million to 200 million subscribers"], "q07": ["members of the Electoral College"],
        "q08": ["block Donald Trump from the presidency"], "q09": ["it teaches cells to make a protein"],
        "q10": ["systems collapse"],
    }
    preds = {
        "original": ["1869", "Franklin", "a hormone that regulates sleep", "milk", "earthquakes", "200 million subscribers",
                     "members of the Electoral College", "", "cells make a protein", "drought"],
        "model": ["in 1869", "Watson", "a hormone that regulates sleep", "tart cherries and walnuts",
                  "drought", "from 20 million", "members of the Electoral College", "block Trump",
                  "it teaches cells", ""],
        "human": ["1869", "Watson and Crick", "a hormone that regulates sleep", "tart cherries, walnuts and milk",
                  "drought and earthquakes", "20 million to 200 million", "members of the Electoral College",
                  "block Donald Trump from the presidency", "protein", "systems collapse"],
    }
    lines(out / "triples.jsonl",
          [json.dumps({"qid": q, "original": o, "model_rewrite": m, "human_rewrite": h}) for q, o, m, h in QUESTIONS])
    lines(out / "gold.jsonl", [json.dumps({"qid": q, "answers": a}) for q, a in gold_answers.items()])
    for name, answers in preds.items():
        lines(out / f"spans_{name}.jsonl",
              [json.dumps({"qid": q, "answer": a}) for (q, *_), a in zip(QUESTIONS, answers)])


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)
    rng = random.Random(20201017)
    retrieval(out / "retrieval", rng)
    reading(out / "reading")


if __name__ == "__main__":
    main()
