#!/usr/bin/env python3
# Copyright 2026 The MitH Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the golden circuit corpus and its evaluation vectors.

Outputs are computed here with plain Python integers, independently of the
C++ evaluator, and frozen into data/corpus/vectors.txt.
"""

import argparse
import pathlib
import random

P256 = 2**256 - 189


class Gen:
    def __init__(self, rng, p, np_, ns, smul=True):
        self.rng, self.p, self.np, self.ns, self.smul = rng, p, np_, ns, smul
        self.next_id = 0
        self.gates = 0

    def gid(self):
        self.gates += 1
        self.next_id += self.rng.randint(1, 3)
        return self.next_id

    def leaf(self, public_only):
        pick = self.rng.randrange(3)
        if pick == 0 or (public_only and self.np == 0):
            return ("const", self.gid(), self.rng.randrange(self.p))
        if public_only or (pick == 1 and self.np > 0):
            return ("pinput", self.rng.randrange(self.np))
        return ("sinput", self.rng.randrange(self.ns))

    def node(self, depth, public_only=False):
        if depth <= 0 or self.rng.randrange(4) == 0:
            return self.leaf(public_only)
        pick = self.rng.randrange(3 if self.smul else 2)
        if pick == 2:
            left = self.node(depth - 1, True)
            right = self.node(depth - 1, public_only)
            return ("smul", self.gid(), left, right)
        left = self.node(depth - 1, public_only)
        right = self.node(depth - 1, public_only)
        return ("add" if pick == 0 else "mul", self.gid(), left, right)


def show(g):
    if g[0] in ("pinput", "sinput"):
        return f"({g[0]} {g[1]})"
    if g[0] == "const":
        return f"(const {g[1]} {g[2]})"
    return f"({g[0]} {g[1]} {show(g[2])} {show(g[3])})"


def count(g):
    if g[0] in ("pinput", "sinput"):
        return 0
    if g[0] == "const":
        return 1
    return 1 + count(g[2]) + count(g[3])


def evaluate(g, p, pub, sec):
    k = g[0]
    if k == "pinput":
        return pub[g[1]] % p
    if k == "sinput":
        return sec[g[1]] % p
    if k == "const":
        return g[2] % p
    a, b = evaluate(g[2], p, pub, sec), evaluate(g[3], p, pub, sec)
    return (a + b) % p if k == "add" else (a * b) % p


def has_secret(g):
    if g[0] == "sinput":
        return True
    return g[0] in ("add", "mul", "smul") and (has_secret(g[2]) or has_secret(g[3]))


def field_name(p):
    return str(p)


def write(out, name, p, np_, ns, g, note=None):
    lines = []
    if note:
        lines.append(f"# {note}")
    lines.append(f"field {p}")
    lines.append(f"topology {np_} {ns} {count(g)}")
    lines.append(show(g))
    (out / f"{name}.arith").write_text("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus"))
    ap.add_argument("--seed", type=int, default=20260301)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    entries = []
    # Hand-written circuits first.
    fixed = [
        ("f101_square_plus_one", 101, 0, 1,
         ("add", 3, ("mul", 2, ("sinput", 0), ("sinput", 0)), ("const", 1, 1)), "w0^2 + 1"),
        ("f11_identity", 11, 0, 1, ("sinput", 0), "bare secret input"),
        ("f11_square", 11, 0, 1, ("mul", 1, ("sinput", 0), ("sinput", 0)), None),
        ("f11_product", 11, 0, 2, ("mul", 1, ("sinput", 0), ("sinput", 1)), None),
        ("f11_scaled_sum", 11, 1, 2,
         ("smul", 4, ("add", 2, ("pinput", 0), ("const", 1, 3)), ("add", 3, ("sinput", 0), ("sinput", 1))), None),
        ("f101_cube_plus_c", 101, 0, 1,
         ("add", 4, ("mul", 2, ("mul", 1, ("sinput", 0), ("sinput", 0)), ("sinput", 0)), ("const", 3, 5)),
         "7 nodes, 2 multiplications"),
        ("f97_cubic", 97, 0, 1,
         ("add", 6, ("mul", 2, ("mul", 1, ("sinput", 0), ("sinput", 0)), ("sinput", 0)),
          ("add", 5, ("mul", 3, ("sinput", 0), ("sinput", 0)), ("const", 4, 5))),
         "11 nodes, 3 multiplications"),
    ]
    for name, p, np_, ns, g, note in fixed:
        write(out, name, p, np_, ns, g, note)
        entries.append((name, p, np_, ns, g))

    plan = [(11, 20), (97, 8), (101, 8), (P256, 7)]
    for p, n in plan:
        for k in range(n):
            while True:
                np_ = rng.randrange(3)
                ns = rng.randint(1, 2) if p == 11 else rng.randint(1, 3)
                gen = Gen(rng, p, np_, ns)
                g = gen.node(rng.randint(1, 5))
                if has_secret(g) and count(g) >= 1:
                    break
            label = "p256" if p == P256 else f"f{p}"
            name = f"{label}_gen{k:02d}"
            write(out, name, p, np_, ns, g)
            entries.append((name, p, np_, ns, g))

    vec_lines = ["# name | public | secret | output (Python integer evaluation)"]
    for name, p, np_, ns, g in entries:
        for _ in range(3):
            pub = [rng.randrange(p) for _ in range(np_)]
            sec = [rng.randrange(p) for _ in range(ns)]
            y = evaluate(g, p, pub, sec)
            vec_lines.append(f"{name} | {' '.join(map(str, pub))} | {' '.join(map(str, sec))} | {y}")
    (out / "vectors.txt").write_text("\n".join(vec_lines) + "\n")
    print(f"wrote {len(entries)} circuits to {out}")


if __name__ == "__main__":
    main()
