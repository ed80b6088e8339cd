#!/usr/bin/env python3
# Copyright 2026 The SentiLens Authors.
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

"""Regenerates the bundled test fixtures. Output is deterministic."""
import json
import os
import random

os.chdir(os.path.dirname(os.path.abspath(__file__)))
rng = random.Random(20150401)

POS = ["great", "love", "happy", "perfect", "amazing", "gentle", "soothing", "lovely", "fresh", "sick"]
NEG = ["terrible", "hate", "horrible", "rash", "itchy", "worst", "allergic", "greasy", "meh", "expired"]
FILLER = ["bought", "store", "bottle", "morning", "shampoo", "today", "smell", "skin", "price",
          "week", "sister", "bathroom", "shelf", "order", "delivery", "brand", "using", "tried",
          "again", "really", "every", "night", "little", "washing", "months"]
PRODUCTS = ["soap", "cream", "deodorant"]
BRANDS = ["Brand X", "Brand Y", "Brand Z"]
NOISE = ["https://t.co/abc{}", "@user{}", "RT", "&amp;", "www.shop{}.com", "2x", "100%"]


def sentence(n_pos, n_neg, product=None):
    words = [rng.choice(POS) for _ in range(n_pos)] + [rng.choice(NEG) for _ in range(n_neg)]
    words += [rng.choice(FILLER) for _ in range(rng.randint(2, 6))]
    if product:
        words.append(product)
    rng.shuffle(words)
    for _ in range(rng.randint(0, 2)):
        noise = rng.choice(NOISE).format(rng.randint(1, 99))
        if noise == "RT":
            words.insert(0, noise)
        else:
            words.insert(rng.randint(0, len(words)), noise)
    return " ".join(words)


def corpus200():
    lines = []
    for i in range(200):
        brand = BRANDS[i % 3]
        product = PRODUCTS[rng.randrange(3)] if rng.random() < 0.45 else None
        n_pos, n_neg = rng.randint(0, 3), rng.randint(0, 2)
        text = sentence(n_pos, n_neg, product)
        if i % 7 == 0:
            text = text.capitalize() + "!!"
        lines.append({"id": "tw%04d" % (i + 1), "text": text, "brand": brand,
                      "created_at": "2015-03-%02dT%02d:%02d:00Z" % (1 + i % 28, i % 24, (7 * i) % 60)})
    # A repeated id and a record that cleans to nothing; the corpus keeps 200.
    lines.insert(50, {"id": "tw0010", "text": "duplicate of an earlier id", "brand": "Brand Y"})
    lines.insert(120, {"id": "tw9999", "text": "@someone https://t.co/xyz", "brand": "Brand Z"})
    return lines


def bootstrap100():
    kinds = ["pos"] * 40 + ["neg"] * 35 + ["zero"] * 25
    rng.shuffle(kinds)
    lines = []
    for i, kind in enumerate(kinds):
        if kind == "pos":
            n_neg = rng.randint(0, 1)
            n_pos = n_neg + rng.randint(1, 2)
        elif kind == "neg":
            n_pos = rng.randint(0, 1)
            n_neg = n_pos + rng.randint(1, 2)
        else:
            n_pos = n_neg = rng.randint(0, 1)
        words = ([rng.choice([w for w in POS if w != "sick"]) for _ in range(n_pos)] +
                 [rng.choice(NEG) for _ in range(n_neg)] +
                 [rng.choice(FILLER) for _ in range(rng.randint(2, 5))])
        rng.shuffle(words)
        lines.append({"id": "b%03d" % (i + 1), "text": " ".join(words)})
    return lines


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")


write_jsonl("corpus200.jsonl", corpus200())
write_jsonl("bootstrap100.jsonl", bootstrap100())
write_jsonl("three_records.jsonl", [
    {"id": "1", "text": "first record"},
    {"id": "2", "text": "second record"},
    {"id": "3", "text": "third record"},
])
with open("five_with_malformed.jsonl", "w", newline="\n") as f:
    f.write('{"id":"a","text":"one"}\n{"id":"b","text":"two"}\n{"id":"c","text": tree}\n'
            '{"id":"d","text":"four"}\n{"id":"e","text":"five"}\n')
open("empty.jsonl", "w").close()
with open("records_array.json", "w", newline="\n") as f:
    f.write('[{"id":"x1","text":"alpha"},{"id":"x2","text":"beta"}]\n')
