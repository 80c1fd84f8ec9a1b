#!/usr/bin/env python3
# Copyright 2026 The ltlgame Authors
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
"""Generates the shipped parity automata as HOA files.

Each automaton is written with one minterm edge per letter and colours used
directly as acceptance marks under `parity max even`. The fixtures are
validated against their formulas by `ltlgame check-automaton`.
"""

import argparse
import itertools
import pathlib


def minterm(letter, n):
    if n == 0:
        return "t"
    return "&".join(str(i) if letter >> i & 1 else "!" + str(i) for i in range(n))


def write_hoa(path, name, formula, aps, states, initial, delta):
    """delta(q, letter) -> (q', colour); colours are 1-based, max even."""
    n = len(aps)
    edges = {}
    k = 0
    for q in range(states):
        for letter in range(1 << n):
            to, colour = delta(q, letter)
            edges[q, letter] = (to, colour)
            k = max(k, colour)
    lines = [
        "HOA: v1",
        f'name: "{name}"',
        f'tool: "gen_dpa_fixtures" "{formula}"',
        f"States: {states}",
        f"Start: {initial}",
        f"AP: {n} " + " ".join(f'"{a}"' for a in aps),
        f"acc-name: parity max even {k + 1}",
        f"Acceptance: {k + 1} " + parity_max_even(k + 1),
        "properties: trans-labels explicit-labels trans-acc deterministic complete",
        "--BODY--",
    ]
    for q in range(states):
        lines.append(f"State: {q}")
        for letter in range(1 << n):
            to, colour = edges[q, letter]
            lines.append(f"[{minterm(letter, n)}] {to} {{{colour}}}")
    lines.append("--END--")
    path.write_text("\n".join(lines) + "\n")


def parity_max_even(n):
    # Inf(n-1) | (Fin(n-2) & (Inf(n-3) | ...)) with even top index.
    expr = None
    for i in range(n):
        atom = f"Inf({i})" if i % 2 == 0 else f"Fin({i})"
        if expr is None:
            expr = atom
        elif i % 2 == 0:
            expr = f"{atom} | ({expr})"
        else:
            expr = f"{atom} & ({expr})"
    return expr


def bit(letter, aps, name):
    return letter >> aps.index(name) & 1 == 1


def example(out):
    aps = ["a", "b", "c"]

    def delta(q, letter):
        a, b, c = (bit(letter, aps, x) for x in aps)
        if q == 0:
            if a and b:
                return 0, 4
            if a and c:
                return 0, 2
            if a:
                return 0, 3
            if c:
                return 1, 5
            return 0, 5
        if c:
            return 1, 2
        return 0, 5

    write_hoa(out / "example.hoa", "example", "(F G a & G F b) | F G c", aps, 2, 0, delta)


def nursery(out):
    # 0: before a; 1: waiting for b; 2: waiting for c; 3: rejecting sink.
    aps = ["a", "b", "c", "d", "e"]

    def delta(q, letter):
        a, b, c, d, e = (bit(letter, aps, x) for x in aps)
        if q == 3 or d:
            return 3, 1
        if q == 0:
            return (1, 1) if a else (0, 1)
        if a:
            return 3, 1
        if q == 1:
            to, colour = (1, 2) if b and c else (2, 1) if b else (1, 1)
        else:
            to, colour = (1, 2) if c else (2, 1)
        return to, colour if e else 3

    write_hoa(out / "nursery.hoa", "nursery",
              "F G e & F a & G (a -> X G !a) & G F b & G F c & G !d",
              aps, 4, 0, delta)


def recurrence_safety(out):
    # 0: running; 1: rejecting sink after d.
    aps = ["a", "d"]

    def delta(q, letter):
        a, d = (bit(letter, aps, x) for x in aps)
        if q == 1 or d:
            return 1, 1
        return (0, 2) if a else (0, 1)

    write_hoa(out / "gf_a_g_not_d.hoa", "gf_a_g_not_d", "G F a & G !d", aps, 2, 0, delta)


def surveillance(out):
    # Rabin pairs (Fin bad, Inf good), turned into a parity automaton by an
    # index appearance record. The third zone's two recurrence targets are
    # degeneralised by a memory bit (0: waiting for e, 1: waiting for f).
    aps = ["a", "b", "c", "d", "e", "f", "g"]
    perms = list(itertools.permutations(range(3)))
    index = {(p, m): i for i, (p, m) in enumerate(itertools.product(perms, (0, 1)))}

    def delta(q, letter):
        perm, m = next(key for key, v in index.items() if v == q)
        has = {x: bit(letter, aps, x) for x in aps}
        bad = [not has["b"], not has["d"], not has["g"]]
        good = [has["a"], has["c"], False]
        if m == 0:
            good[2] = has["e"] and has["f"]
            m2 = 1 if has["e"] and not has["f"] else 0
        else:
            good[2] = has["f"]
            m2 = 0 if has["f"] else 1
        # perm[i] is the pair at position i + 1, position 1 lowest.
        pb = max((i + 1 for i, p in enumerate(perm) if bad[p]), default=0)
        pg = max((i + 1 for i, p in enumerate(perm) if good[p]), default=0)
        colour = 2 * pg if pg > pb else 2 * pb + 1 if pb > 0 else 1
        moved = [p for p in perm if bad[p]] + [p for p in perm if not bad[p]]
        return index[tuple(moved), m2], colour

    write_hoa(out / "surveillance.hoa", "surveillance",
              "(F G b & G F a) | (F G d & G F c) | (F G g & G F e & G F f)",
              aps, len(index), index[perms[0], 0], delta)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path(__file__).resolve().parent.parent / "data" / "automata")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    example(args.out)
    nursery(args.out)
    recurrence_safety(args.out)
    surveillance(args.out)


if __name__ == "__main__":
    main()
