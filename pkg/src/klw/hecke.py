"""
Hecke algebra arithmetic, Kazhdan-Lusztig polynomials and structure constants.

Conventions: ``q = v^2``; the standard basis ``T_w`` satisfies
``T_s^2 = (q - 1) T_s + q T_e``; the canonical basis element is
``C'_w = v^{-l(w)} sum_{x <= w} P_{x,w}(q) T_x``.

KL polynomials are computed row by row (one row per ``w``, in length order)
with the left-descent recursion. Rows of equal length are independent, which
is what ``jobs > 1`` exploits.
"""

from __future__ import annotations

import multiprocessing
import os
from functools import cached_property
from typing import Iterable

from .coxeter import CoxeterSystem, Element
from .errors import UsageError
from .laurent import LaurentPoly

__all__ = [
    "NORMALIZATION",
    "KLTable",
    "HeckeAlgebra",
    "HeckeElement",
    "kl_polynomial",
    "mu",
    "q_poly",
]

NORMALIZATION = "v-soergel"

QPoly = tuple[int, ...]  # dense coefficients in q, constant term first


def q_poly(coeffs: Iterable[int]) -> LaurentPoly:
    """Wrap a dense coefficient list in ``q`` as a :class:`LaurentPoly` named ``q``."""
    return LaurentPoly.from_coeffs(list(coeffs), name="q")


def _trim(acc: list[int]) -> QPoly:
    while acc and acc[-1] == 0:
        acc.pop()
    return tuple(acc)


class _RowBuilder:
    """Mutable state while a table is being filled; never exposed."""

    def __init__(self, system: CoxeterSystem):
        ix = system.indexed
        self.ix = ix
        n = len(ix.elements)
        self.rows: list[dict[int, QPoly] | None] = [None] * n
        self.mus: list[list[tuple[int, int]] | None] = [None] * n

    def row(self, iw: int) -> tuple[dict[int, QPoly], list[tuple[int, int]]]:
        ix = self.ix
        L = ix.lengths
        lower = ix.lower
        if iw == 0:
            return {0: (1,)}, []
        s = ix.words[iw][0] - 1
        sbit = 1 << s
        ldesc = ix.ldesc
        lm = ix.lmul[s]
        v = lm[iw]
        rowv = self.rows[v]
        Lw = L[iw]
        terms = [(z, m, (Lw - L[z]) // 2, lower[z], self.rows[z])
                 for z, m in self.mus[v] if ldesc[z] & sbit]
        below = lower[iw]
        xs = []
        b = below
        while b:
            low = b & -b
            xs.append(low.bit_length() - 1)
            b ^= low
        row: dict[int, QPoly] = {}
        for x in xs:
            if not ldesc[x] & sbit:
                continue
            if x == iw:
                row[x] = (1,)
                continue
            # sx < x: P_{x,w} = P_{sx,v} + q P_{x,v} - sum mu(z,v) q^{(l(w)-l(z))/2} P_{x,z}
            acc = [0] * ((Lw - L[x] + 1) // 2 + 1)
            for k, a in enumerate(rowv[lm[x]]):
                acc[k] += a
            pxv = rowv.get(x)
            if pxv:
                for k, a in enumerate(pxv, 1):
                    acc[k] += a
            for z, m, sh, lz, rz in terms:
                if lz >> x & 1:
                    for k, a in enumerate(rz[x], sh):
                        acc[k] -= m * a
            row[x] = _trim(acc)
        for x in xs:
            if not ldesc[x] & sbit:
                row[x] = row[lm[x]]
        mus = []
        for x in xs:
            gap = Lw - L[x]
            if x != iw and gap % 2:
                p = row[x]
                d = (gap - 1) // 2
                if d < len(p) and p[d]:
                    mus.append((x, p[d]))
        return row, mus


_WORKER: _RowBuilder | None = None


def _worker_rows(ws: list[int]):
    return [(iw, *_WORKER.row(iw)) for iw in ws]


class KLTable:
    """Sealed table of KL polynomials ``P_{x,w}`` and mu-coefficients.

    Build with :meth:`build` (or load with :func:`klw.tableio.load_table`);
    there is no mutating API once constructed.
    """

    normalization = NORMALIZATION

    def __init__(self, system: CoxeterSystem, rows: list[dict[int, QPoly]],
                 mus: list[list[tuple[int, int]]] | None = None):
        self.system = system
        self._rows = rows
        if mus is None:
            L = system.indexed.lengths
            mus = []
            for iw, row in enumerate(rows):
                lst = []
                for x in sorted(row):
                    gap = L[iw] - L[x]
                    d = (gap - 1) // 2
                    if x != iw and gap % 2 and d < len(row[x]) and row[x][d]:
                        lst.append((x, row[x][d]))
                mus.append(lst)
        self._mus = mus

    @cached_property
    def _mu_maps(self) -> list[dict[int, int]]:
        return [dict(m) for m in self._mus]

    @classmethod
    def build(cls, system: CoxeterSystem | str, jobs: int = 1) -> KLTable:
        """Fill the table for every ``w``; ``jobs > 1`` forks workers per length layer."""
        global _WORKER
        if not isinstance(system, CoxeterSystem):
            system = CoxeterSystem(system)
        ix = system.indexed
        builder = _RowBuilder(system)
        layers: dict[int, list[int]] = {}
        for i, ell in enumerate(ix.lengths):
            layers.setdefault(ell, []).append(i)
        use_pool = jobs > 1 and "fork" in multiprocessing.get_all_start_methods()
        for ell in sorted(layers):
            layer = layers[ell]
            if use_pool and len(layer) >= 4 * jobs:
                _WORKER = builder
                chunks = [layer[k::jobs] for k in range(jobs)]
                with multiprocessing.get_context("fork").Pool(jobs) as pool:
                    results = [r for part in pool.map(_worker_rows, chunks) for r in part]
                _WORKER = None
            else:
                results = [(iw, *builder.row(iw)) for iw in layer]
            for iw, row, mus in results:
                builder.rows[iw] = row
                builder.mus[iw] = mus
        rows = [{x: r[x] for x in sorted(r)} for r in builder.rows]
        return cls(system, rows, builder.mus)

    @property
    def elements(self) -> list[Element]:
        return self.system.indexed.elements

    def __len__(self):
        return len(self._rows)

    def coeffs(self, ix: int, iw: int) -> QPoly:
        """Dense ``q``-coefficients of ``P_{x,w}`` by element indices; ``()`` if zero."""
        return self._rows[iw].get(ix, ())

    def row(self, iw: int) -> dict[int, QPoly]:
        """``{x: P_{x,w}}`` over the Bruhat interval below ``w`` (a copy)."""
        return dict(self._rows[iw])

    def mu_below(self, iw: int) -> list[tuple[int, int]]:
        """Pairs ``(z, mu(z, w))`` with ``z < w`` and ``mu != 0``."""
        return self._mus[iw]

    def mu_index(self, ix: int, iw: int) -> int:
        return self._mu_maps[iw].get(ix, 0)

    def poly(self, x: Element, w: Element) -> LaurentPoly:
        idx = self.system.indexed.index
        self.system._check_same(x.system)
        self.system._check_same(w.system)
        return q_poly(self.coeffs(idx[x.data], idx[w.data]))

    def mu(self, x: Element, w: Element) -> int:
        idx = self.system.indexed.index
        return self.mu_index(idx[x.data], idx[w.data])

    def at_one(self, ix: int, iw: int) -> int:
        return sum(self.coeffs(ix, iw))

    def pairs(self):
        """Yield ``(x, w, coeffs)`` index triples for all ``x <= w``, in canonical order."""
        for iw, row in enumerate(self._rows):
            for x, p in row.items():
                yield x, iw, p

    def __eq__(self, other):
        return (
            isinstance(other, KLTable)
            and self.system == other.system
            and self._rows == other._rows
        )

    def __repr__(self):
        return f"KLTable({str(self.system.cartan)!r}, {sum(len(r) for r in self._rows)} pairs)"


def kl_polynomial(table: KLTable, x: Element, w: Element) -> LaurentPoly:
    """``P_{x,w}`` as a polynomial in ``q``; zero unless ``x <= w``.

    >>> T = KLTable.build("A3")
    >>> W = T.system
    >>> kl_polynomial(T, W.element("2"), W.element("2132"))
    1 + q
    """
    return table.poly(x, w)


def mu(table: KLTable, x: Element, w: Element) -> int:
    """Coefficient of ``q^{(l(w)-l(x)-1)/2}`` in ``P_{x,w}``; zero when not applicable."""
    return table.mu(x, w)


V = LaurentPoly.var()
Q = V * V
V_PLUS_VINV = V + V**-1


class HeckeElement:
    """A sparse combination of ``T_w`` (``basis='T'``) or ``C'_w`` (``basis='C'``)."""

    __slots__ = ("algebra", "basis", "terms")

    def __init__(self, algebra: HeckeAlgebra, basis: str, terms: dict[int, LaurentPoly]):
        if basis not in ("T", "C"):
            raise UsageError("basis must be 'T' (standard) or 'C' (Kazhdan-Lusztig)")
        self.algebra = algebra
        self.basis = basis
        self.terms = {k: c for k, c in terms.items() if c}

    def _check(self, other: HeckeElement):
        if not isinstance(other, HeckeElement):
            raise UsageError("expected a HeckeElement")
        self.algebra.system._check_same(other.algebra.system)

    def _same_basis(self, other: HeckeElement) -> HeckeElement:
        self._check(other)
        if other.basis == self.basis:
            return other
        return self.algebra.to_kl_basis(other) if self.basis == "C" else self.algebra.to_standard_basis(other)

    def __add__(self, other):
        o = self._same_basis(other)
        t = dict(self.terms)
        for k, c in o.terms.items():
            t[k] = t.get(k, 0) + c
        return HeckeElement(self.algebra, self.basis, t)

    def __neg__(self):
        return HeckeElement(self.algebra, self.basis, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return HeckeElement(self.algebra, self.basis, {k: c * other for k, c in self.terms.items()})
        return self.algebra.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        o = self._same_basis(other)
        return self.terms == o.terms

    def coefficient(self, w: Element) -> LaurentPoly:
        return self.terms.get(self.algebra.system.index(w), LaurentPoly())

    def items(self) -> list[tuple[Element, LaurentPoly]]:
        els = self.algebra.system.indexed.elements
        return [(els[k], self.terms[k]) for k in sorted(self.terms)]

    def specialize(self) -> dict[Element, int]:
        """Coefficients at ``v = 1``."""
        return {w: c(1) for w, c in self.items() if c(1)}

    def __repr__(self):
        if not self.terms:
            return "0"
        sym = "T" if self.basis == "T" else "C'"
        return " + ".join(f"({c!r})*{sym}[{w!r}]" for w, c in self.items())


class HeckeAlgebra:
    """The Hecke algebra of a finite Weyl group over ``Z[v, v^-1]``."""

    def __init__(self, table: KLTable | CoxeterSystem | str):
        if isinstance(table, KLTable):
            self.system = table.system
            self._table = table
        else:
            self.system = table if isinstance(table, CoxeterSystem) else CoxeterSystem(table)
            self._table = None
        self._ix = self.system.indexed
        self._products: dict[tuple[int, bool], list[dict[int, object]]] = {}

    @property
    def table(self) -> KLTable:
        if self._table is None:
            self._table = KLTable.build(self.system)
        return self._table

    def _idx(self, w: Element | int) -> int:
        return w if isinstance(w, int) else self.system.index(w)

    def T(self, w: Element | int) -> HeckeElement:
        return HeckeElement(self, "T", {self._idx(w): LaurentPoly(1)})

    def C(self, w: Element | int) -> HeckeElement:
        return HeckeElement(self, "C", {self._idx(w): LaurentPoly(1)})

    def one(self) -> HeckeElement:
        return HeckeElement(self, "T", {0: LaurentPoly(1)})

    # -- standard basis -------------------------------------------------

    def _rmul_T(self, terms: dict[int, LaurentPoly], g: int) -> dict[int, LaurentPoly]:
        rm, L = self._ix.rmul[g], self._ix.lengths
        out: dict[int, LaurentPoly] = {}
        for x, c in terms.items():
            xs = rm[x]
            if L[xs] > L[x]:
                out[xs] = out.get(xs, 0) + c
            else:
                out[x] = out.get(x, 0) + c * (Q - 1)
                out[xs] = out.get(xs, 0) + c * Q
        return {k: c for k, c in out.items() if c}

    def multiply(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        """Product in the standard basis via the quadratic relation."""
        a._check(b)
        a, b = self.to_standard_basis(a), self.to_standard_basis(b)
        out: dict[int, LaurentPoly] = {}
        for y, cy in b.terms.items():
            terms = a.terms
            for g in self._ix.words[y]:
                terms = self._rmul_T(terms, g - 1)
            for x, c in terms.items():
                out[x] = out.get(x, 0) + c * cy
        return HeckeElement(self, "T", out)

    # -- basis changes --------------------------------------------------

    def _c_in_t(self, iw: int) -> dict[int, LaurentPoly]:
        # coefficient of T_x in C'_w is v^{-l(w)} P_{x,w}(v^2)
        shift = -self._ix.lengths[iw]
        return {
            x: LaurentPoly.from_coeffs(p, start=shift, step=2)
            for x, p in self.table.row(iw).items()
        }

    def to_standard_basis(self, a: HeckeElement) -> HeckeElement:
        if a.basis == "T":
            return a
        out: dict[int, LaurentPoly] = {}
        for w, c in a.terms.items():
            for x, p in self._c_in_t(w).items():
                out[x] = out.get(x, 0) + c * p
        return HeckeElement(self, "T", out)

    def to_kl_basis(self, a: HeckeElement) -> HeckeElement:
        if a.basis == "C":
            return a
        L = self._ix.lengths
        rest = dict(a.terms)
        out: dict[int, LaurentPoly] = {}
        while rest:
            w = max(rest)  # canonical order refines length, so this is maximal in Bruhat order
            cw = rest[w] * V ** L[w]
            out[w] = cw
            for x, p in self._c_in_t(w).items():
                nv = rest.get(x, 0) - cw * p
                if nv:
                    rest[x] = nv
                else:
                    rest.pop(x, None)
        return HeckeElement(self, "C", out)

    # -- structure constants ---------------------------------------------

    def _rmul_C(self, vec: dict[int, object], g: int, two) -> dict[int, object]:
        ix = self._ix
        rm, L, rdesc = ix.rmul[g], ix.lengths, ix.rdesc
        bit = 1 << g
        table = self.table
        out: dict[int, object] = {}
        for u, c in vec.items():
            us = rm[u]
            if L[us] < L[u]:
                out[u] = out.get(u, 0) + c * two
            else:
                out[us] = out.get(us, 0) + c
                for z, m in table.mu_below(u):
                    if rdesc[z] & bit:
                        out[z] = out.get(z, 0) + c * m
        return out

    def left_products(self, x: Element | int, at_q1: bool = False) -> list[dict[int, object]]:
        """``C'_x C'_y`` in the KL basis for every ``y`` (indexed by ``y``).

        Uses ``C'_{y'} C'_s = C'_y + sum_{z < y', zs < z} mu(z, y') C'_z`` for
        ``y = y's > y'``, so only mu-coefficients are needed. With ``at_q1``
        the coefficients are plain integers.
        """
        ixx = self._idx(x)
        key = (ixx, at_q1)
        if key in self._products:
            return self._products[key]
        ix = self._ix
        table = self.table
        two = 2 if at_q1 else V_PLUS_VINV
        one = 1 if at_q1 else LaurentPoly(1)
        prods: list[dict[int, object]] = [{}] * len(ix.elements)
        prods[0] = {ixx: one}
        for y in range(1, len(ix.elements)):
            g = ix.words[y][-1] - 1
            yp = ix.rmul[g][y]
            acc = self._rmul_C(prods[yp], g, two)
            bit = 1 << g
            for z, m in table.mu_below(yp):
                if ix.rdesc[z] & bit:
                    for u, c in prods[z].items():
                        acc[u] = acc.get(u, 0) - c * m
            prods[y] = {u: c for u, c in acc.items() if c}
        self._products[key] = prods
        return prods

    def h_constant(self, x: Element | int, y: Element | int, z: Element | int, at_q1: bool = False):
        """Coefficient of ``C'_z`` in ``C'_x C'_y`` (an integer when ``at_q1``)."""
        prods = self.left_products(x, at_q1)
        c = prods[self._idx(y)].get(self._idx(z), 0)
        if at_q1:
            return c
        return c if isinstance(c, LaurentPoly) else LaurentPoly(c)


def default_jobs() -> int:
    return os.cpu_count() or 1
