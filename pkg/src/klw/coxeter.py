"""
Finite Weyl groups of types A and B (and products of them).

Elements are stored in the permutation model: a permutation of ``1..n+1`` in
one-line notation for a component of type ``A_n`` and a signed permutation of
``1..n`` for a component of type ``B_n`` (type ``C_n`` is the same group and
only keeps its label). Simple reflections are numbered ``1..rank`` across the
components, in order. For ``B_n`` the generator ``s_1`` changes the sign of
the first entry and ``s_k`` (``k >= 2``) swaps entries ``k-1`` and ``k``, so
``m(s_1, s_2) = 4``.

>>> W = CoxeterSystem("A2")
>>> w0 = W.longest_element()
>>> w0.length, w0.reduced_word()
(3, (1, 2, 1))
>>> W.element([1, 2, 1]) == W.element([2, 1, 2])
True
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, repeat
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, UsageError

__all__ = [
    "DEFAULT_MAX_ORDER",
    "CartanType",
    "CoxeterSystem",
    "Element",
    "ParabolicSubset",
]

DEFAULT_MAX_ORDER = 10**6

Perm = tuple[int, ...]
Data = tuple[Perm, ...]


@dataclass(frozen=True)
class CartanType:
    """A product of irreducible types ``A_n``, ``B_n`` or ``C_n``.

    ``components`` keeps the user's labels; :attr:`families` maps ``C`` to
    ``B`` since the Weyl groups coincide.
    """

    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        comps = tuple((str(f).upper(), int(r)) for f, r in self.components)
        if not comps:
            raise UsageError("a Cartan type needs at least one component")
        for fam, rank in comps:
            if fam not in ("A", "B", "C"):
                raise UsageError(f"unsupported family {fam!r}; use A, B or C")
            if rank < 1:
                raise UsageError(f"rank must be >= 1, got {rank}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, text: str | CartanType) -> CartanType:
        """Parse strings such as ``"A3"``, ``"B2"``, ``"A1xB3"`` or ``"A2+C2"``."""
        if isinstance(text, CartanType):
            return text
        return _parse_cartan(text)

    @cached_property
    def families(self) -> tuple[str, ...]:
        return tuple("B" if f == "C" else f for f, _ in self.components)

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        return tuple(r for _, r in self.components)

    @cached_property
    def rank(self) -> int:
        return sum(self.ranks)

    @cached_property
    def order(self) -> int:
        total = 1
        for fam, n in zip(self.families, self.ranks):
            total *= math.factorial(n + 1) if fam == "A" else 2**n * math.factorial(n)
        return total

    def __str__(self):
        return "x".join(f"{f}{r}" for f, r in self.components)


@lru_cache(maxsize=256)
def _parse_cartan(text: str) -> CartanType:
    # instances are immutable, so repeated parses share one (and its cached properties)
    parts = [p for p in re.split(r"[x+*, ]+", text.strip()) if p]
    comps = []
    for part in parts:
        m = re.fullmatch(r"([A-Za-z])_?(\d+)", part)
        if not m:
            raise UsageError(f"cannot parse Cartan type component {part!r}")
        comps.append((m.group(1), int(m.group(2))))
    return CartanType(tuple(comps))


def _compose(a: Perm, b: Perm) -> Perm:
    # (a*b)(i) = a(b(i)), extended to signed values by a(-i) = -a(i)
    return tuple(a[j - 1] if j > 0 else -a[-j - 1] for j in b)


def _inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a, start=1):
        if j > 0:
            out[j - 1] = i
        else:
            out[-j - 1] = -i
    return tuple(out)


def _length_A(p: Perm) -> int:
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def _length_B(p: Perm) -> int:
    # inv + neg + nsp for signed permutations (sign change at position 1 is s_1)
    n = len(p)
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
    neg = sum(1 for x in p if x < 0)
    nsp = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] + p[j] < 0)
    return inv + neg + nsp


class Element:
    """An element of a :class:`CoxeterSystem` in permutation normal form."""

    __slots__ = ("system", "data", "_length", "_hash")

    def __init__(self, system: CoxeterSystem, data: Data, length: int | None = None):
        self.system = system
        self.data = data
        self._length = length
        self._hash = None

    @property
    def length(self) -> int:
        if self._length is None:
            self._length = sum(
                _length_A(p) if fam == "A" else _length_B(p)
                for fam, p in zip(self.system.cartan.families, self.data)
            )
        return self._length

    def __len__(self):
        return self.length

    def __mul__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        self.system._check_same(other.system)
        return Element(
            self.system, tuple(_compose(a, b) for a, b in zip(self.data, other.data))
        )

    def __pow__(self, k: int) -> Element:
        out = self.system.identity
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self) -> Element:
        return Element(self.system, tuple(_inverse(p) for p in self.data))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.data == other.data and self.system._key == other.system._key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.system._key, self.data))
        return self._hash

    def is_identity(self) -> bool:
        return self == self.system.identity

    def descents(self, side: str = "right") -> frozenset[int]:
        """Generators ``s`` with ``l(ws) < l(w)`` (right) or ``l(sw) < l(w)`` (left)."""
        gens = self.system.generators
        if side == "right":
            return frozenset(i for i, s in enumerate(gens, 1) if (self * s).length < self.length)
        if side == "left":
            return frozenset(i for i, s in enumerate(gens, 1) if (s * self).length < self.length)
        raise UsageError(f"side must be 'left' or 'right', got {side!r}")

    def reduced_word(self) -> tuple[int, ...]:
        """Lexicographically smallest reduced word (greedy smallest left descent)."""
        gens = self.system.generators
        word = []
        w = self
        while w.length:
            for i, s in enumerate(gens, 1):
                sw = s * w
                if sw.length < w.length:
                    word.append(i)
                    w = sw
                    break
        return tuple(word)

    def word_string(self) -> str:
        return "".join(str(i) for i in self.reduced_word())

    def __repr__(self):
        word = self.reduced_word()
        return "e" if not word else "*".join(f"s{i}" for i in word)

    def __lt__(self, other: Element) -> bool:
        # canonical enumeration order: (length, reduced word)
        return (self.length, self.reduced_word()) < (other.length, other.reduced_word())


@dataclass(frozen=True, eq=False)
class ParabolicSubset:
    """A subset ``J`` of simple reflections and its parabolic subgroup ``W_J``."""

    system: CoxeterSystem
    J: frozenset[int]

    @cached_property
    def longest_element(self) -> Element:
        gens = self.system.generators
        w = self.system.identity
        grew = True
        while grew:
            grew = False
            for j in sorted(self.J):
                ws = w * gens[j - 1]
                if ws.length > w.length:
                    w, grew = ws, True
        return w

    @cached_property
    def order(self) -> int:
        seen = {self.system.identity}
        frontier = list(seen)
        gens = [self.system.generators[j - 1] for j in self.J]
        while frontier:
            nxt = []
            for w in frontier:
                for s in gens:
                    ws = w * s
                    if ws not in seen:
                        seen.add(ws)
                        nxt.append(ws)
            frontier = nxt
        return len(seen)

    def __contains__(self, w: Element) -> bool:
        return set(w.reduced_word()) <= self.J

    def __eq__(self, other):
        return isinstance(other, ParabolicSubset) and self.J == other.J and self.system == other.system

    def __hash__(self):
        return hash(self.J)

    def __repr__(self):
        return f"ParabolicSubset({sorted(self.J)})"


class _Indexed:
    """Integer-indexed view of an enumerated group, used by the heavy routines.

    ``rmul[g][i]`` is the index of ``elements[i] * s_{g+1}`` and ``lmul`` the
    left analogue; descents are bitmasks over 0-based generators.
    """

    def __init__(self, system: CoxeterSystem):
        gens = system.generators
        ident = system.identity
        seen = {ident.data: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for w in frontier:
                for s in gens:
                    ws = w * s
                    if ws.data not in seen:
                        if len(seen) >= system.max_order:
                            raise CapacityError(
                                f"{system.cartan} exceeds the enumeration bound {system.max_order}"
                            )
                        seen[ws.data] = ws
                        nxt.append(ws)
            frontier = nxt

        by_length: dict[int, list[Element]] = {}
        for w in seen.values():
            by_length.setdefault(w.length, []).append(w)
        words: dict[Data, tuple[int, ...]] = {ident.data: ()}
        for ell in sorted(by_length):
            if ell == 0:
                continue
            for w in by_length[ell]:
                for i, s in enumerate(gens, 1):
                    sw = s * w
                    if sw.data in words and sw.length < ell:
                        words[w.data] = (i,) + words[sw.data]
                        break
        ordered = sorted(seen.values(), key=lambda w: (w.length, words[w.data]))

        self.elements: list[Element] = ordered
        self.index: dict[Data, int] = {w.data: i for i, w in enumerate(ordered)}
        self.lengths: list[int] = [w.length for w in ordered]
        self.words: list[tuple[int, ...]] = [words[w.data] for w in ordered]
        idx = self.index
        self.rmul = [[idx[(w * s).data] for w in ordered] for s in gens]
        self.lmul = [[idx[(s * w).data] for w in ordered] for s in gens]
        self.inv = [idx[w.inverse().data] for w in ordered]
        L = self.lengths
        self.rdesc = [
            sum(1 << g for g in range(len(gens)) if L[self.rmul[g][i]] < L[i])
            for i in range(len(ordered))
        ]
        self.ldesc = [
            sum(1 << g for g in range(len(gens)) if L[self.lmul[g][i]] < L[i])
            for i in range(len(ordered))
        ]

    @classmethod
    def restore(cls, system: CoxeterSystem, datas: list[Data], words: list[tuple[int, ...]],
                rmul: list[list[int]], lmul: list[list[int]], inv: list[int],
                rdesc: list[int], ldesc: list[int]) -> _Indexed:
        """Rebuild from stored tables without re-enumerating the group."""
        self = cls.__new__(cls)
        self.lengths = list(map(len, words))
        elements = list(map(Element, repeat(system), datas, self.lengths))
        self.elements = elements
        self.index = dict(zip(datas, range(len(datas))))
        self.words = words
        self.rmul, self.lmul, self.inv = rmul, lmul, inv
        self.rdesc, self.ldesc = rdesc, ldesc
        return self

    @cached_property
    def lower(self) -> list[int]:
        """Bitset of the Bruhat interval ``[e, w]`` for each ``w``.

        Built from the subword property: the products of subwords of a
        reduced word ``w = w's`` are those of ``w'`` together with their
        right translates by ``s``.
        """
        n = len(self.elements)
        lower = [0] * n
        lower[0] = 1
        for i in range(1, n):
            g = self.words[i][-1] - 1
            prev = self.rmul[g][i]
            bits = lower[prev]
            out = bits
            rm = self.rmul[g]
            b = bits
            while b:
                low = b & -b
                out |= 1 << rm[low.bit_length() - 1]
                b ^= low
            lower[i] = out
        return lower

    def leq(self, x: int, w: int) -> bool:
        return bool(self.lower[w] >> x & 1)


class CoxeterSystem:
    """A finite Weyl group of type A/B (or a product) with its simple reflections.

    ``max_order`` bounds the size of any full enumeration of the group.
    """

    def __init__(self, cartan: str | CartanType, max_order: int = DEFAULT_MAX_ORDER):
        self.cartan = CartanType.parse(cartan)
        self.max_order = max_order
        self._key = (self.cartan.families, self.cartan.ranks)
        self._slots: list[tuple[int, int]] = []  # (component, local index)
        for c, n in enumerate(self.cartan.ranks):
            self._slots.extend((c, k) for k in range(1, n + 1))
        sizes = [n + 1 if fam == "A" else n for fam, n in zip(self.cartan.families, self.cartan.ranks)]
        self._sizes = sizes
        self.identity = Element(self, tuple(tuple(range(1, m + 1)) for m in sizes))
        self.generators: list[Element] = [self._generator(c, k) for c, k in self._slots]

    def _generator(self, c: int, k: int) -> Element:
        comps = list(self.identity.data)
        p = list(comps[c])
        if self.cartan.families[c] == "A":
            p[k - 1], p[k] = p[k], p[k - 1]
        elif k == 1:
            p[0] = -p[0]
        else:
            p[k - 2], p[k - 1] = p[k - 1], p[k - 2]
        comps[c] = tuple(p)
        return Element(self, tuple(comps))

    def __repr__(self):
        return f"CoxeterSystem({str(self.cartan)!r})"

    def __eq__(self, other):
        return isinstance(other, CoxeterSystem) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def _check_same(self, other: CoxeterSystem):
        if other is not self and other != self:
            raise UsageError(f"elements of {self.cartan} and {other.cartan} cannot be combined")

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def order(self) -> int:
        return self.cartan.order

    @cached_property
    def coxeter_matrix(self) -> np.ndarray:
        r = self.rank
        m = np.full((r, r), 2, dtype=int)
        np.fill_diagonal(m, 1)
        for a in range(r):
            for b in range(a + 1, r):
                (ca, ka), (cb, kb) = self._slots[a], self._slots[b]
                if ca != cb or kb - ka != 1:
                    continue
                if self.cartan.families[ca] == "B" and ka == 1:
                    m[a, b] = m[b, a] = 4
                else:
                    m[a, b] = m[b, a] = 3
        return m

    def element(self, word: Iterable[int] | str = ()) -> Element:
        """The product of the simple reflections in ``word`` (a digit string or list)."""
        if isinstance(word, str):
            if not word.isdigit() and word != "":
                raise UsageError(f"word {word!r} must be a string of generator digits")
            word = [int(ch) for ch in word]
        w = self.identity
        for i in word:
            if not 1 <= int(i) <= self.rank:
                raise UsageError(f"generator index {i} out of range 1..{self.rank} for {self.cartan}")
            w = w * self.generators[int(i) - 1]
        return w

    def from_permutations(self, *perms: Sequence[int]) -> Element:
        """Build an element from one (signed) permutation per component, in one-line notation."""
        if len(perms) != len(self._sizes):
            raise UsageError(f"{self.cartan} needs {len(self._sizes)} permutations")
        data = []
        for fam, m, p in zip(self.cartan.families, self._sizes, perms):
            p = tuple(int(x) for x in p)
            if len(p) != m or sorted(abs(x) for x in p) != list(range(1, m + 1)):
                raise UsageError(f"{p} is not a permutation of 1..{m}")
            if fam == "A" and min(p) < 0:
                raise UsageError("type A components take unsigned permutations")
            data.append(p)
        return Element(self, tuple(data))

    def longest_element(self) -> Element:
        return self.parabolic(range(1, self.rank + 1)).longest_element

    def parabolic(self, J: Iterable[int] | ParabolicSubset) -> ParabolicSubset:
        if isinstance(J, ParabolicSubset):
            self._check_same(J.system)
            return J
        J = frozenset(int(j) for j in J)
        if not J <= set(range(1, self.rank + 1)):
            raise UsageError(f"parabolic subset {sorted(J)} not within 1..{self.rank}")
        return ParabolicSubset(self, J)

    def parabolic_subsets(self) -> list[ParabolicSubset]:
        """All ``2^rank`` subsets, by size then lexicographically."""
        gens = range(1, self.rank + 1)
        return [self.parabolic(c) for k in range(self.rank + 1) for c in combinations(gens, k)]

    @cached_property
    def indexed(self) -> _Indexed:
        if self.order > self.max_order:
            raise CapacityError(f"|W({self.cartan})| = {self.order} exceeds the bound {self.max_order}")
        return _Indexed(self)

    def _install_indexed(self, ix: _Indexed) -> None:
        self.__dict__["indexed"] = ix

    def all_elements(self) -> list[Element]:
        """Every element once, sorted by (length, lexicographic reduced word)."""
        return list(self.indexed.elements)

    def index(self, w: Element) -> int:
        self._check_same(w.system)
        return self.indexed.index[w.data]

    def __len__(self):
        return self.order

    def bruhat_leq(self, x: Element, w: Element) -> bool:
        """``x <= w`` in Bruhat order (subword property on a reduced word of ``w``)."""
        self._check_same(x.system)
        self._check_same(w.system)
        if x.length > w.length:
            return False
        if self.order <= self.max_order:
            ix = self.indexed
            return ix.leq(ix.index[x.data], ix.index[w.data])
        products = {self.identity.data}
        for i in w.reduced_word():
            s = self.generators[i - 1]
            products |= {_mul_data(p, s.data) for p in products}
        return x.data in products

    def coset_rep_of(self, w: Element, J: ParabolicSubset | Iterable[int], side: str = "left",
                     extremal: str = "max") -> Element:
        """The extremal element of ``w W_J`` (side ``left``) or ``W_J w`` (side ``right``)."""
        J = J if isinstance(J, ParabolicSubset) else self.parabolic(J)
        if side not in ("left", "right") or extremal not in ("min", "max"):
            raise UsageError("side must be left/right and extremal min/max")
        want_longer = extremal == "max"
        moved = True
        while moved:
            moved = False
            for j in sorted(J.J):
                s = self.generators[j - 1]
                u = w * s if side == "left" else s * w
                if (u.length > w.length) == want_longer:
                    w, moved = u, True
        return w

    def coset_representatives(self, J: ParabolicSubset | Iterable[int], side: str = "left",
                              extremal: str = "max") -> list[Element]:
        """One extremal representative per coset, in canonical element order."""
        J = J if isinstance(J, ParabolicSubset) else self.parabolic(J)
        if side not in ("left", "right") or extremal not in ("min", "max"):
            raise UsageError("side must be left/right and extremal min/max")
        ix = self.indexed
        mask = sum(1 << (j - 1) for j in J.J)
        desc = ix.rdesc if side == "left" else ix.ldesc
        if extremal == "max":
            keep = [i for i in range(len(ix.elements)) if desc[i] & mask == mask]
        else:
            keep = [i for i in range(len(ix.elements)) if desc[i] & mask == 0]
        return [ix.elements[i] for i in keep]


def _mul_data(a: Data, b: Data) -> Data:
    return tuple(_compose(p, q) for p, q in zip(a, b))
