"""
Kazhdan-Lusztig preorders and cells, Robinson-Schensted, and the two
"facts" about cells (parabolic longest elements; left/right intersections).

The preorders are generated by multiplication with ``C'_s`` only: ``x -> z``
whenever ``C'_z`` occurs in ``C'_s C'_x`` (left) or ``C'_x C'_s`` (right),
``z != x``. With this orientation ``e`` is the unique minimum and ``w_0`` the
unique maximum, and ``x <= y`` means ``y`` is reachable from ``x``.

In type A, with elements in one-line notation and right multiplication acting
on positions, left cells are the fibres of the recording tableau ``Q`` and
right cells the fibres of the insertion tableau ``P``; a two-sided cell is
higher when its shape is lower in dominance order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .coxeter import CoxeterSystem, Element
from .errors import UsageError
from .hecke import KLTable

__all__ = [
    "SIDES",
    "Preorder",
    "CellPartition",
    "RSPair",
    "cell_preorder",
    "cells",
    "rs_insert",
    "rs_inverse",
    "rs_cells",
    "dominance_leq",
    "shape_order",
    "Fact1Report",
    "Fact2Report",
    "check_fact1",
    "check_fact2",
]

SIDES = ("left", "right", "two-sided")

# Recorded in reports so that a convention change is visible.
ORIENTATION = "e minimal, w0 maximal; cell(x) <= cell(y) iff shape(y) <= shape(x) in dominance"


def _check_side(side: str) -> str:
    if side not in SIDES:
        raise UsageError(f"side must be one of {SIDES}, got {side!r}")
    return side


def _edges(table: KLTable, side: str) -> list[list[int]]:
    ix = table.system.indexed
    L = ix.lengths
    n = len(ix.elements)
    out: list[set[int]] = [set() for _ in range(n)]
    kinds = {"left": [(ix.lmul, ix.ldesc)], "right": [(ix.rmul, ix.rdesc)]}
    kinds["two-sided"] = kinds["left"] + kinds["right"]
    for mul, desc in kinds[side]:
        for g, m in enumerate(mul):
            bit = 1 << g
            for x in range(n):
                sx = m[x]
                if L[sx] < L[x]:
                    continue  # C'_s C'_x = (v + v^-1) C'_x
                out[x].add(sx)
                out[x].update(z for z, _ in table.mu_below(x) if desc[z] & bit)
    return [sorted(e) for e in out]


@dataclass(frozen=True)
class Preorder:
    """Element-level KL preorder: ``leq(x, y)`` iff ``y`` is reachable from ``x``."""

    system: CoxeterSystem
    side: str
    edges: list[list[int]] = field(repr=False)
    reach: list[int] = field(repr=False)  # bitset of everything >= x, x included

    def _i(self, x):
        return x if isinstance(x, int) else self.system.index(x)

    def leq(self, x: Element | int, y: Element | int) -> bool:
        return bool(self.reach[self._i(x)] >> self._i(y) & 1)

    def equivalent(self, x: Element | int, y: Element | int) -> bool:
        return self.leq(x, y) and self.leq(y, x)


@dataclass(frozen=True)
class CellPartition:
    """Cells of one side and the partial order they inherit.

    ``blocks`` are tuples of element indices, sorted by their smallest member;
    ``above[i]`` is the bitset of blocks ``j`` with ``i <= j`` (``i`` included).
    """

    system: CoxeterSystem
    side: str
    blocks: list[tuple[int, ...]]
    block_of: list[int] = field(repr=False)
    above: list[int] = field(repr=False)

    def __len__(self):
        return len(self.blocks)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.above[i] >> j & 1)

    def order_pairs(self) -> list[tuple[int, int]]:
        """All strict relations ``i < j``."""
        return [(i, j) for i in range(len(self)) for j in range(len(self)) if i != j and self.leq(i, j)]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges."""
        strict = set(self.order_pairs())
        return sorted(
            (i, j) for i, j in strict
            if not any((i, k) in strict and (k, j) in strict for k in range(len(self)))
        )

    def elements(self, i: int) -> list[Element]:
        els = self.system.indexed.elements
        return [els[k] for k in self.blocks[i]]

    def cell_of(self, w: Element | int) -> int:
        return self.block_of[w if isinstance(w, int) else self.system.index(w)]

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(b) for b in self.blocks}

    def words(self, i: int) -> list[str]:
        ws = self.system.indexed.words
        return ["".join(map(str, ws[k])) for k in self.blocks[i]]

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "cells": [self.words(i) for i in range(len(self))],
            "order": [list(p) for p in self.covers()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dot(self, labels: Sequence[str] | None = None) -> str:
        """Hasse diagram of the cell order, one node per cell, edges pointing upwards."""
        lines = [f'digraph "{self.system.cartan} {self.side} cells" {{']
        for i in range(len(self)):
            tip = " ".join(w or "e" for w in self.words(i))
            label = labels[i] if labels else str(i)
            lines.append(f'  {i} [label="{label}", tooltip="{tip}"];')
        for i, j in self.covers():
            lines.append(f"  {i} -> {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _closure(edges: list[list[int]]) -> tuple[list[tuple[int, ...]], list[int], list[int]]:
    n = len(edges)
    rows = [i for i, e in enumerate(edges) for _ in e]
    cols = [j for e in edges for j in e]
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="strong")
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(i)
    blocks = sorted(tuple(g) for g in groups.values())
    block_of = [0] * n
    for b, members in enumerate(blocks):
        for i in members:
            block_of[i] = b
    succ: list[set[int]] = [set() for _ in blocks]
    for i, e in enumerate(edges):
        for j in e:
            if block_of[i] != block_of[j]:
                succ[block_of[i]].add(block_of[j])
    # quotient is a DAG; close it with a memoized DFS
    above: list[int | None] = [None] * len(blocks)

    def visit(b: int) -> int:
        stack = [(b, iter(succ[b]))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                bits = 1 << node
                for c in succ[node]:
                    bits |= above[c]
                above[node] = bits
            elif above[nxt] is None:
                stack.append((nxt, iter(succ[nxt])))
        return above[b]

    for b in range(len(blocks)):
        if above[b] is None:
            visit(b)
    return blocks, block_of, above


def cell_preorder(table: KLTable, side: str = "left") -> Preorder:
    """The KL preorder of ``side`` on elements of ``table.system``."""
    _check_side(side)
    edges = _edges(table, side)
    blocks, block_of, above = _closure(edges)
    member_bits = [sum(1 << i for i in b) for b in blocks]
    block_reach = []
    for b in range(len(blocks)):
        bits, a = 0, above[b]
        while a:
            low = a & -a
            bits |= member_bits[low.bit_length() - 1]
            a ^= low
        block_reach.append(bits)
    reach = [block_reach[block_of[i]] for i in range(len(edges))]
    return Preorder(table.system, side, edges, reach)


def cells(table: KLTable, side: str = "left") -> CellPartition:
    """Strongly connected components of the preorder with the induced partial order."""
    _check_side(side)
    blocks, block_of, above = _closure(_edges(table, side))
    return CellPartition(table.system, side, blocks, block_of, above)


# -- Robinson-Schensted ---------------------------------------------------

Tableau = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RSPair:
    """Insertion tableau ``P``, recording tableau ``Q`` and their common shape."""

    P: Tableau
    Q: Tableau

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.P)


def _one_line(perm: Element | Sequence[int]) -> tuple[int, ...]:
    if isinstance(perm, Element):
        fams = perm.system.cartan.families
        if fams != ("A",):
            raise UsageError("Robinson-Schensted needs a single type-A component")
        return perm.data[0]
    p = tuple(int(a) for a in perm)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise UsageError(f"{p} is not a permutation of 1..{len(p)}")
    return p


def rs_insert(perm: Element | Sequence[int]) -> RSPair:
    """Row-insert ``w(1), ..., w(n)`` (one-line notation)."""
    P: list[list[int]] = []
    Q: list[list[int]] = []
    for step, a in enumerate(_one_line(perm), 1):
        row = 0
        while True:
            if row == len(P):
                P.append([a])
                Q.append([step])
                break
            r = P[row]
            # first entry larger than a gets bumped
            lo, hi = 0, len(r)
            while lo < hi:
                mid = (lo + hi) // 2
                if r[mid] > a:
                    hi = mid
                else:
                    lo = mid + 1
            if lo == len(r):
                r.append(a)
                Q[row].append(step)
                break
            r[lo], a = a, r[lo]
            row += 1
    return RSPair(tuple(map(tuple, P)), tuple(map(tuple, Q)))


def rs_inverse(pair: RSPair) -> tuple[int, ...]:
    """Recover the permutation from ``(P, Q)`` by reverse bumping."""
    P = [list(r) for r in pair.P]
    Q = [list(r) for r in pair.Q]
    n = sum(len(r) for r in P)
    out = [0] * n
    for step in range(n, 0, -1):
        row = next(i for i, r in enumerate(Q) if r and r[-1] == step)
        Q[row].pop()
        a = P[row].pop()
        for k in range(row - 1, -1, -1):
            r = P[k]
            # largest entry smaller than a gets bumped up
            j = max(i for i, b in enumerate(r) if b < a)
            r[j], a = a, r[j]
        out[step - 1] = a
        if not P[-1]:
            P.pop()
            Q.pop()
    return tuple(out)


def dominance_leq(p: Sequence[int], r: Sequence[int]) -> bool:
    """``p <= r`` in dominance order: every prefix sum of ``p`` is at most that of ``r``."""
    if sum(p) != sum(r):
        raise UsageError(f"partitions {tuple(p)} and {tuple(r)} have different sizes")
    sp = sr = 0
    for k in range(max(len(p), len(r))):
        sp += p[k] if k < len(p) else 0
        sr += r[k] if k < len(r) else 0
        if sp > sr:
            return False
    return True


def rs_cells(system: CoxeterSystem, side: str = "left") -> CellPartition:
    """Cells of ``S_n`` read off from tableaux; the two-sided order is reversed dominance."""
    _check_side(side)
    if system.cartan.families != ("A",):
        raise UsageError("rs_cells needs a single type-A component")
    ix = system.indexed
    pairs = [rs_insert(w) for w in ix.elements]
    if side == "left":
        keys = [p.Q for p in pairs]
    elif side == "right":
        keys = [p.P for p in pairs]
    else:
        keys = [p.shape for p in pairs]
    groups: dict[object, list[int]] = {}
    for i, k in enumerate(keys):
        groups.setdefault(k, []).append(i)
    blocks = sorted(tuple(g) for g in groups.values())
    block_of = [0] * len(ix.elements)
    for b, members in enumerate(blocks):
        for i in members:
            block_of[i] = b
    shapes = [pairs[b[0]].shape for b in blocks]
    # one-sided orders are not determined by tableaux alone; only comparability of the
    # two-sided shape order is recorded, which bounds them from above
    above = []
    for i, si in enumerate(shapes):
        bits = 0
        for j, sj in enumerate(shapes):
            if i == j or (side == "two-sided" and dominance_leq(sj, si)):
                bits |= 1 << j
        above.append(bits)
    return CellPartition(system, side, blocks, block_of, above)


def shape_order(system: CoxeterSystem) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    """For each shape of ``S_n``, the shapes strictly below it in dominance order."""
    shapes = sorted({rs_insert(w).shape for w in system.indexed.elements}, reverse=True)
    return {s: [t for t in shapes if t != s and dominance_leq(t, s)] for s in shapes}


# -- Facts 1 and 2 ---------------------------------------------------------


@dataclass
class Fact1Report:
    """Which two-sided cells contain a longest element ``w_0^J``."""

    system: CoxeterSystem
    holds: bool
    witnesses: dict[int, tuple[int, ...]]  # cell -> smallest J whose w_0^J lies in it
    missing: list[int]
    partition: CellPartition = field(repr=False)

    def to_dict(self) -> dict:
        part = self.partition
        return {
            "holds": self.holds,
            "cells": len(part),
            "witnesses": [
                {"cell": i, "J": list(J), "w0J": self.system.parabolic(J).longest_element.word_string()}
                for i, J in sorted(self.witnesses.items())
            ],
            "missing": [{"cell": i, "elements": part.words(i)} for i in self.missing],
        }


@dataclass
class Fact2Report:
    """Sizes of left-cell / right-cell intersections."""

    system: CoxeterSystem
    holds: bool
    violations: list[tuple[int, int, tuple[int, ...]]]  # (left cell, right cell, members)
    max_intersection: int
    left: CellPartition = field(repr=False)
    right: CellPartition = field(repr=False)
    two_sided: CellPartition = field(repr=False)

    def witness_pair(self) -> tuple[Element, Element] | None:
        """Two distinct elements sharing both a left and a right cell, if any."""
        if not self.violations:
            return None
        els = self.system.indexed.elements
        members = self.violations[0][2]
        return els[members[0]], els[members[1]]

    def to_dict(self) -> dict:
        words = self.system.indexed.words
        pair = self.witness_pair()
        return {
            "holds": self.holds,
            "max_intersection": self.max_intersection,
            "witness_pair": [w.word_string() for w in pair] if pair else None,
            "violations": [
                {"left_cell": l, "right_cell": r, "elements": ["".join(map(str, words[k])) for k in m]}
                for l, r, m in self.violations
            ],
        }


def check_fact1(table: KLTable, partition: CellPartition | None = None) -> Fact1Report:
    """Does every two-sided cell contain the longest element of a parabolic subgroup?"""
    part = partition or cells(table, "two-sided")
    witnesses: dict[int, tuple[int, ...]] = {}
    for P in table.system.parabolic_subsets():
        b = part.cell_of(P.longest_element)
        witnesses.setdefault(b, tuple(sorted(P.J)))
    missing = [i for i in range(len(part)) if i not in witnesses]
    return Fact1Report(table.system, not missing, witnesses, missing, part)


def check_fact2(table: KLTable) -> Fact2Report:
    """Do a left and a right cell meet in at most one element?"""
    left, right, two = (cells(table, s) for s in SIDES)
    meet: dict[tuple[int, int], list[int]] = {}
    for x in range(len(table)):
        meet.setdefault((left.block_of[x], right.block_of[x]), []).append(x)
    for (l, r), members in meet.items():
        # a nonempty intersection forces both cells into one two-sided cell
        assert len({two.block_of[k] for k in left.blocks[l] + right.blocks[r]}) == 1
    violations = sorted((l, r, tuple(m)) for (l, r), m in meet.items() if len(m) > 1)
    biggest = max(len(m) for m in meet.values())
    return Fact2Report(table.system, not violations, violations, biggest, left, right, two)
