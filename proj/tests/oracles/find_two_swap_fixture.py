# Copyright 2026 The qroute Authors
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

"""Search for a 6-qubit, 5-layer CNOT circuit on the 2x3 grid whose optimal
routing needs exactly two SWAPs and whose unique optimal first SWAP is (1,3).

Independent of the C++ implementation: plain BFS over (mapping, progress).
"""
import itertools
import random
import sys

ROWS, COLS = 2, 3
EDGES = sorted(
    {tuple(sorted((ROWS * c + r, ROWS * c + r + 1))) for c in range(COLS) for r in range(ROWS - 1)}
    | {tuple(sorted((ROWS * c + r, ROWS * (c + 1) + r))) for c in range(COLS - 1) for r in range(ROWS)}
)
ADJ = {frozenset(e) for e in EDGES}


def asap_layers(gates):
    depth = [0] * 6
    out = []
    for g in gates:
        d = max(depth[g[0]], depth[g[1]])
        depth[g[0]] = depth[g[1]] = d + 1
        out.append(d)
    return out


def execute(pending, phys):
    blocked = set()
    rest = []
    for g in pending:
        a, b = g
        if a not in blocked and b not in blocked and frozenset((phys[a], phys[b])) in ADJ:
            continue
        blocked.update(g)
        rest.append(g)
    return tuple(rest)


def swap(phys, e):
    inv = {p: q for q, p in enumerate(phys)}
    phys = list(phys)
    qa, qb = inv[e[0]], inv[e[1]]
    phys[qa], phys[qb] = phys[qb], phys[qa]
    return tuple(phys)


def min_swaps(gates, bound=6):
    start = (tuple(range(6)), execute(tuple(gates), tuple(range(6))))
    if not start[1]:
        return 0, set()
    frontier = {start: None}
    seen = {start}
    first = {start: None}
    for depth in range(1, bound + 1):
        nxt = {}
        for (phys, pend), f in frontier.items():
            for e in EDGES:
                p2 = swap(phys, e)
                r2 = execute(pend, p2)
                st = (p2, r2)
                fm = e if f is None else f
                if st in seen:
                    continue
                nxt.setdefault(st, set())
                if isinstance(nxt[st], set):
                    nxt[st].add(fm)
        done_first = set()
        for (phys, pend), fms in nxt.items():
            if not pend:
                done_first |= fms
        if done_first:
            return depth, done_first
        seen |= set(nxt)
        frontier = {k: next(iter(v)) for k, v in nxt.items()}
    return None, set()


def exact_first_moves(gates):
    # Optimal first moves: e such that 1 + min_swaps(after e) == optimum.
    opt, _ = min_swaps(gates)
    phys0 = tuple(range(6))
    rest0 = execute(tuple(gates), phys0)
    moves = []
    for e in EDGES:
        p = swap(phys0, e)
        r = execute(rest0, p)
        sub = min_swaps_from(p, r)
        if sub is not None and sub + 1 == opt:
            moves.append(e)
    return opt, moves


def min_swaps_from(phys, pend, bound=6):
    if not pend:
        return 0
    frontier = {(phys, pend)}
    seen = set(frontier)
    for depth in range(1, bound + 1):
        nxt = set()
        for p, r in frontier:
            for e in EDGES:
                p2 = swap(p, e)
                r2 = execute(r, p2)
                if not r2:
                    return depth
                if (p2, r2) not in seen:
                    seen.add((p2, r2))
                    nxt.add((p2, r2))
        frontier = nxt
    return None


def main(seed):
    rng = random.Random(seed)
    pairs = [p for p in itertools.combinations(range(6), 2)]
    for _ in range(200000):
        gates = [(1, 5)]
        for _ in range(rng.randint(6, 11)):
            gates.append(tuple(rng.sample(range(6), 2)))
        lay = asap_layers(gates)
        if max(lay) != 4 or lay.count(0) != 1:
            continue
        if not any(lay[i] == 4 and set(g) == {0, 2} for i, g in enumerate(gates)):
            continue
        opt, moves = exact_first_moves(gates)
        if opt == 2 and moves == [(1, 3)]:
            # the second swap (1,3) must also complete an optimal routing
            p = swap(tuple(range(6)), (1, 3))
            r = execute(execute(tuple(gates), tuple(range(6))), p)
            r2 = execute(r, swap(p, (1, 3)))
            if r2:
                continue
            print(gates, lay)
            return
    print("none", file=sys.stderr)


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 1)
