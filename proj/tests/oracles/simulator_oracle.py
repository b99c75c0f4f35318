#!/usr/bin/env python3
# Copyright 2026 The ctxforge Authors
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
"""Independent reference for the seeded biased-ASR simulator and WER.

Builds a fixed 100-token reference, runs the simulator procedure with an
empty context and prints the hypothesis together with the word error rate.
"""
import struct
import sys

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
VOWELS = "aeiou"


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def draw_key(seed, doc_id, index, j):
    doc = doc_id.encode("utf-8")
    payload = (struct.pack("<Q", seed) + struct.pack("<I", len(doc)) + doc +
               struct.pack("<Q", index) + struct.pack("<Q", j))
    return fnv1a64(payload)


def corrupt(w):
    if len(w) == 1:
        return "a"
    for i, ch in enumerate(w):
        if ch in VOWELS:
            nxt = VOWELS[(VOWELS.index(ch) + 1) % len(VOWELS)]
            return w[:i] + nxt + w[i + 1:]
    return w[:-1]


def simulate(tokens, seed, doc_id, index, context, stop, common, p_ctx, p_base):
    out = []
    for j, w in enumerate(tokens):
        if w in stop or w in common:
            out.append(w)
            continue
        key = draw_key(seed, doc_id, index, j)
        u = (key >> 11) * (2.0 ** -53)
        p = p_ctx if w in context else p_base
        out.append(w if u < p else corrupt(w))
    return out


def edit_distance(ref, hyp):
    prev = list(range(len(hyp) + 1))
    for i in range(1, len(ref) + 1):
        cur = [i] + [0] * len(hyp)
        for j in range(1, len(hyp) + 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (ref[i - 1] != hyp[j - 1]))
        prev = cur
    return prev[-1]


def reference_tokens():
    words = ["the", "zebra", "crossed", "of", "kilimanjaro", "and", "rhythm",
             "quantum", "x", "serengeti"]
    return [words[(i * 7 + i // 10) % len(words)] for i in range(100)]


if __name__ == "__main__":
    ref = reference_tokens()
    stop = {"the", "of", "and"}
    hyp = simulate(ref, 7, "doc-a", 3, set(), stop, set(), 0.95, 0.5)
    print(" ".join(ref))
    print(" ".join(hyp))
    print(repr(edit_distance(ref, hyp) / len(ref)))
