"""
Grothendieck groups of integral blocks of category O and the functors acting on them.

Indexing: the regular block has one Verma ``Delta_w`` and one simple ``L_w``
per ``w`` in ``W``; ``Delta_e`` is the dominant Verma (projective) and
``L_e`` the finite-dimensional simple. Multiplicities are
``[Delta_x : L_y] = P_{x,y}(1)``, nonzero only for ``x <= y``. A singular block
with stabilizer ``W_J`` is indexed by the maximal representatives of
``W / W_J``, and its multiplicities are transported from the regular block.

Functors act on Verma coordinates:

* ``theta(x)``: ``[Delta_w] -> w C'_x`` at ``q = 1`` (right multiplication);
* ``wall_on(J)``: ``[Delta_w] -> [Delta^J_{coset of w}]``;
* ``wall_out(J)``: ``[Delta^J_y] -> sum of [Delta_u]`` over the coset ``y W_J``.

Simple-basis matrices are conjugates of these by the base change.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Mapping

import numpy as np

from .coxeter import Element, ParabolicSubset
from .errors import UsageError
from .hecke import HeckeAlgebra, KLTable
from .oracles import unitriangular_inverse

__all__ = [
    "BlockDescriptor",
    "GrothendieckVector",
    "FunctorSymbol",
    "CategoryO",
    "ThmOutRow",
    "WallReport",
    "Sl2Class",
    "Sl2TensorCase",
    "sl2_tensor_case",
    "sl2_zero_case_in_block",
]


@dataclass(frozen=True, eq=False)
class BlockDescriptor:
    """An integral block: ``J`` empty means regular, otherwise singular with stabilizer ``W_J``."""

    table: KLTable = field(repr=False)
    wall: ParabolicSubset
    positions: tuple[int, ...] = field(repr=False)  # element indices of the index set

    @property
    def regular(self) -> bool:
        return not self.wall.J

    @property
    def index_set(self) -> list[Element]:
        els = self.table.system.indexed.elements
        return [els[i] for i in self.positions]

    @cached_property
    def slot(self) -> dict[int, int]:
        return {e: k for k, e in enumerate(self.positions)}

    def __len__(self):
        return len(self.positions)

    def __eq__(self, other):
        return isinstance(other, BlockDescriptor) and self.wall == other.wall and self.table is other.table

    def __hash__(self):
        return hash(self.wall.J)

    def __repr__(self):
        kind = "regular" if self.regular else f"singular J={sorted(self.wall.J)}"
        return f"<{kind} block of {self.table.system.cartan}, {len(self)} simples>"


@dataclass(frozen=True, eq=False)
class GrothendieckVector:
    """Integer coordinates over a block's Verma or Simple basis."""

    block: BlockDescriptor
    basis: str
    vec: np.ndarray

    def __post_init__(self):
        if self.basis not in ("verma", "simple"):
            raise UsageError("basis must be 'verma' or 'simple'")
        v = np.asarray(self.vec, dtype=np.int64)
        if v.shape != (len(self.block),):
            raise UsageError(f"vector of length {v.shape} does not fit {self.block}")
        object.__setattr__(self, "vec", v)

    @property
    def coeffs(self) -> dict[Element, int]:
        els = self.block.index_set
        return {els[k]: int(c) for k, c in enumerate(self.vec) if c}

    def __getitem__(self, w: Element) -> int:
        k = self.block.slot.get(self.block.table.system.index(w))
        if k is None:
            raise UsageError(f"{w!r} is not in the index set of {self.block}")
        return int(self.vec[k])

    def _same(self, other: GrothendieckVector):
        if other.block != self.block or other.basis != self.basis:
            raise UsageError("vectors live in different blocks or bases")

    def __add__(self, other: GrothendieckVector) -> GrothendieckVector:
        self._same(other)
        return GrothendieckVector(self.block, self.basis, self.vec + other.vec)

    def __sub__(self, other: GrothendieckVector) -> GrothendieckVector:
        self._same(other)
        return GrothendieckVector(self.block, self.basis, self.vec - other.vec)

    def __rmul__(self, k: int) -> GrothendieckVector:
        return GrothendieckVector(self.block, self.basis, k * self.vec)

    def __eq__(self, other):
        return (
            isinstance(other, GrothendieckVector)
            and other.block == self.block
            and other.basis == self.basis
            and np.array_equal(self.vec, other.vec)
        )

    def __repr__(self):
        sym = "Delta" if self.basis == "verma" else "L"
        sup = "" if self.block.regular else "^J"
        terms = [f"{c}*{sym}{sup}[{w!r}]" for w, c in self.coeffs.items()]
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class FunctorSymbol:
    """``theta`` (regular -> regular), ``on`` (regular -> singular) or ``out`` (singular -> regular)."""

    kind: str
    domain: BlockDescriptor
    codomain: BlockDescriptor
    x: Element | None = None

    def __repr__(self):
        if self.kind == "theta":
            return f"theta[{self.x!r}]"
        J = self.codomain.wall.J if self.kind == "on" else self.domain.wall.J
        return f"wall_{self.kind}{sorted(J)}"


@dataclass
class ThmOutRow:
    y: Element
    multiplicity: int
    stabilizer_order: int
    image: GrothendieckVector  # wall_out of the singular simple, in the regular Simple basis
    socle_candidates: list[Element]  # maximal coset reps in the support

    @property
    def ok(self) -> bool:
        return (
            self.multiplicity == self.stabilizer_order
            and self.socle_candidates == [self.y]
            and bool((self.image.vec >= 0).all())
        )


@dataclass
class WallReport:
    J: tuple[int, ...]
    out_on_equals_theta: bool  # wall_out . wall_on == theta(w_0^J)
    on_out_is_scalar: bool  # wall_on . wall_out == |W_J| Id
    stabilizer_order: int
    longest: Element

    @property
    def ok(self) -> bool:
        return self.out_on_equals_theta and self.on_out_is_scalar


class CategoryO:
    """Integral blocks attached to one KL table, with cached functor matrices.

    >>> O = CategoryO(KLTable.build("A1"))
    >>> e, s = O.system.identity, O.system.generators[0]
    >>> O.verma_to_simple(O.verma(O.regular, e))
    1*L[e] + 1*L[s1]
    >>> O.theta_on_simple(s, s)
    1*L[e] + 2*L[s1]
    """

    def __init__(self, table: KLTable):
        self.table = table
        self.system = table.system
        self._ix = self.system.indexed
        self._blocks: dict[frozenset[int], BlockDescriptor] = {}

    # -- blocks ----------------------------------------------------------

    def block(self, J=()) -> BlockDescriptor:
        P = J if isinstance(J, ParabolicSubset) else self.system.parabolic(J)
        if P.J not in self._blocks:
            mask = sum(1 << (j - 1) for j in P.J)
            rdesc = self._ix.rdesc
            pos = tuple(i for i in range(len(rdesc)) if rdesc[i] & mask == mask)
            self._blocks[P.J] = BlockDescriptor(self.table, P, pos)
        return self._blocks[P.J]

    @property
    def regular(self) -> BlockDescriptor:
        return self.block(())

    def singular(self, J) -> BlockDescriptor:
        b = self.block(J)
        if b.regular:
            raise UsageError("a singular block needs a non-empty J")
        return b

    def _own(self, block: BlockDescriptor):
        if block.table is not self.table:
            raise UsageError("block belongs to a different table")

    def verma(self, block: BlockDescriptor, w: Element) -> GrothendieckVector:
        return self._unit(block, w, "verma")

    def simple(self, block: BlockDescriptor, w: Element) -> GrothendieckVector:
        return self._unit(block, w, "simple")

    def vector(self, block: BlockDescriptor, coeffs: Mapping[Element, int], basis: str = "verma"):
        v = np.zeros(len(block), dtype=np.int64)
        for w, c in coeffs.items():
            v[self._slot(block, w)] += c
        return GrothendieckVector(block, basis, v)

    def _slot(self, block: BlockDescriptor, w: Element) -> int:
        k = block.slot.get(self.system.index(w))
        if k is None:
            raise UsageError(f"{w!r} is not a maximal coset representative for {block}")
        return k

    def _unit(self, block, w, basis):
        v = np.zeros(len(block), dtype=np.int64)
        v[self._slot(block, w)] = 1
        return GrothendieckVector(block, basis, v)

    # -- base change -----------------------------------------------------

    def multiplicity_matrix(self, block: BlockDescriptor) -> np.ndarray:
        """``D[a, b] = [Delta_a : L_b]`` over the block's index set (transported if singular)."""
        self._own(block)
        pos = block.positions
        return np.array([[self.table.at_one(x, y) for y in pos] for x in pos], dtype=np.int64)

    def _v2s(self, block: BlockDescriptor) -> np.ndarray:
        key = ("v2s", block.wall.J)
        if key not in self._cache:
            self._cache[key] = self.multiplicity_matrix(block).T.copy()
        return self._cache[key]

    def _s2v(self, block: BlockDescriptor) -> np.ndarray:
        key = ("s2v", block.wall.J)
        if key not in self._cache:
            self._cache[key] = unitriangular_inverse(self._v2s(block))
        return self._cache[key]

    @cached_property
    def _cache(self) -> dict:
        return {}

    def verma_to_simple(self, v: GrothendieckVector) -> GrothendieckVector:
        if v.basis == "simple":
            return v
        return GrothendieckVector(v.block, "simple", self._v2s(v.block) @ v.vec)

    def simple_to_verma(self, v: GrothendieckVector) -> GrothendieckVector:
        if v.basis == "verma":
            return v
        return GrothendieckVector(v.block, "verma", self._s2v(v.block) @ v.vec)

    # -- functors ----------------------------------------------------------

    def theta(self, x: Element) -> FunctorSymbol:
        return FunctorSymbol("theta", self.regular, self.regular, x)

    def wall_on(self, J) -> FunctorSymbol:
        return FunctorSymbol("on", self.regular, self.singular(J))

    def wall_out(self, J) -> FunctorSymbol:
        return FunctorSymbol("out", self.singular(J), self.regular)

    def functor_matrix(self, f: FunctorSymbol, basis: str = "verma") -> np.ndarray:
        """Matrix acting on column vectors of ``f.domain`` coordinates."""
        key = (f.kind, f.x, f.domain.wall.J, f.codomain.wall.J)
        if key not in self._cache:
            self._cache[key] = self._verma_matrix(f)
        m = self._cache[key]
        if basis == "verma":
            return m
        if basis != "simple":
            raise UsageError("basis must be 'verma' or 'simple'")
        return self._v2s(f.codomain) @ m @ self._s2v(f.domain)

    def _verma_matrix(self, f: FunctorSymbol) -> np.ndarray:
        ix = self._ix
        n = len(ix.elements)
        if f.kind == "theta":
            x = self.system.index(f.x)
            col_x = [(u, sum(p)) for u, p in self.table.row(x).items()]
            m = np.zeros((n, n), dtype=np.int64)
            els = ix.elements
            idx = ix.index
            for w in range(n):
                ew = els[w]
                for u, c in col_x:
                    m[idx[(ew * els[u]).data], w] += c
            return m
        sing = f.codomain if f.kind == "on" else f.domain
        rep = self._max_rep_slots(sing)
        on = np.zeros((len(sing), n), dtype=np.int64)
        on[rep, np.arange(n)] = 1
        return on if f.kind == "on" else on.T.copy()

    def _max_rep_slots(self, sing: BlockDescriptor) -> np.ndarray:
        """For every ``w`` in ``W``, the slot of the maximal representative of ``w W_J``."""
        ix = self._ix
        L = ix.lengths
        out = np.empty(len(L), dtype=np.int64)
        gens = sorted(sing.wall.J)
        for w in range(len(L)):
            u = w
            moved = True
            while moved:
                moved = False
                for j in gens:
                    us = ix.rmul[j - 1][u]
                    if L[us] > L[u]:
                        u, moved = us, True
            out[w] = sing.slot[u]
        return out

    def apply_functor(self, f: FunctorSymbol, v: GrothendieckVector) -> GrothendieckVector:
        if v.block != f.domain:
            raise UsageError(f"{f!r} acts on {f.domain}, got a vector of {v.block}")
        out = GrothendieckVector(f.codomain, "verma", self.functor_matrix(f) @ self.simple_to_verma(v).vec)
        return out if v.basis == "verma" else self.verma_to_simple(out)

    def theta_on_simple(self, x: Element, w: Element) -> GrothendieckVector:
        """``theta_x L_w`` in the Simple basis."""
        return self.apply_functor(self.theta(x), self.simple(self.regular, w))

    # -- checks --------------------------------------------------------------

    def composition_defect(self, x: Element, y: Element, hecke: HeckeAlgebra | None = None) -> np.ndarray:
        """``theta_y theta_x - sum_z h_{x,y,z}(1) theta_z`` (zero when composition is faithful)."""
        H = hecke or HeckeAlgebra(self.table)
        lhs = self.functor_matrix(self.theta(y)) @ self.functor_matrix(self.theta(x))
        rhs = np.zeros_like(lhs)
        for z, c in H.left_products(x, at_q1=True)[self.system.index(y)].items():
            rhs += c * self.functor_matrix(self.theta(self._ix.elements[z]))
        return lhs - rhs

    def wall_crossing_vs_theta(self, J) -> WallReport:
        P = self.system.parabolic(J)
        if not P.J:
            n = len(self._ix.elements)
            eye = np.eye(n, dtype=np.int64)
            same = np.array_equal(self.functor_matrix(self.theta(self.system.identity)), eye)
            return WallReport((), same, same, 1, self.system.identity)
        on = self.functor_matrix(self.wall_on(P))
        out = self.functor_matrix(self.wall_out(P))
        w0 = P.longest_element
        theta = self.functor_matrix(self.theta(w0))
        k = P.order
        return WallReport(
            tuple(sorted(P.J)),
            bool(np.array_equal(out @ on, theta)),
            bool(np.array_equal(on @ out, k * np.eye(on.shape[0], dtype=np.int64))),
            k,
            w0,
        )

    def wall_on_simple_rule(self, J) -> bool:
        """``wall_on L_w = L^J_w`` for maximal reps ``w`` and ``0`` otherwise, in the Simple basis."""
        sing = self.singular(J)
        m = self.functor_matrix(self.wall_on(sing.wall), "simple")
        want = np.zeros_like(m)
        for k, e in enumerate(sing.positions):
            want[k, e] = 1
        return bool(np.array_equal(m, want))

    def singular_consistency(self, J) -> bool:
        """``P_{x,y}(1) = P_{x',y}(1)`` for ``x, x'`` in one coset and ``y`` a maximal rep."""
        sing = self.singular(J)
        rep = self._max_rep_slots(sing)
        reps = sing.positions
        for x in range(len(rep)):
            r = reps[rep[x]]
            for y in reps:
                if self.table.at_one(x, y) != self.table.at_one(r, y):
                    return False
        return True

    def thmout_row(self, J, y: Element) -> ThmOutRow:
        sing = self.singular(J)
        image = self.apply_functor(self.wall_out(sing.wall), self.simple(sing, y))
        reps = set(sing.positions)
        els = self._ix.elements
        cands = [els[e] for k, e in enumerate(self.regular.positions) if image.vec[k] and e in reps]
        return ThmOutRow(y, image[y], sing.wall.order, image, cands)

    def thmout_multiplicity(self, J, y: Element) -> int:
        """Coefficient of ``L_y`` in ``wall_out L^J_y``; the expected value is ``|W_J|``."""
        return self.thmout_row(J, y).multiplicity

    def thmout_table(self, J) -> list[ThmOutRow]:
        sing = self.singular(J)
        return [self.thmout_row(sing.wall, y) for y in sing.index_set]


# -- the sl_2 case analysis ------------------------------------------------


class Sl2Class(Enum):
    NOT_INTEGER = "NotInteger"
    INTEGER_AT_LEAST_2 = "IntegerAtLeast2"
    INTEGER_ONE = "IntegerOne"
    ZERO = "Zero"


_OUTCOMES = {
    Sl2Class.NOT_INTEGER: ("DirectSumOfTwoSimples", "Delta_l (x) V = Delta_{l+e} + Delta_{l-e}"),
    Sl2Class.INTEGER_AT_LEAST_2: ("DirectSumOfTwoSimples", "Delta_l (x) V = Delta_{l+e} + Delta_{l-e}"),
    Sl2Class.INTEGER_ONE: ("SimplePlusThetaOn", "Delta_l (x) V = Delta_{l+e} + Delta_{l-e}"),
    Sl2Class.ZERO: ("ThetaOutFiltration", "Delta_l (x) V = P_{l-e}"),
}


@dataclass(frozen=True)
class Sl2TensorCase:
    """Shape of ``S (x) V_i`` for a simple ``S`` whose dominant weight has ``i``-th coordinate ``lambda_i``."""

    lambda_i: object
    classification: Sl2Class
    outcome: str
    verma_identity: str
    notes: tuple[str, ...] = ()


def sl2_tensor_case(lambda_i, integral: bool | None = None) -> Sl2TensorCase:
    """Classify ``lambda_i`` (an exact rational, or pass ``integral=False`` for non-rational values)."""
    if integral is False:
        cls = Sl2Class.NOT_INTEGER
    else:
        try:
            val = Fraction(lambda_i)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"lambda_i={lambda_i!r} is not an exact rational; pass integral=False") from exc
        if val.denominator != 1:
            cls = Sl2Class.NOT_INTEGER
        elif val < 0:
            raise UsageError(f"lambda_i={val} is a negative integer, so the weight is not dominant")
        elif val == 0:
            cls = Sl2Class.ZERO
        elif val == 1:
            cls = Sl2Class.INTEGER_ONE
        else:
            cls = Sl2Class.INTEGER_AT_LEAST_2
    outcome, identity = _OUTCOMES[cls]
    notes = {
        Sl2Class.NOT_INTEGER: ("summands lie in the blocks of lambda+e and lambda-e",),
        Sl2Class.INTEGER_AT_LEAST_2: ("summands lie in the blocks of lambda+e and lambda-e",),
        Sl2Class.INTEGER_ONE: ("second summand is wall_on S: zero or simple",),
        Sl2Class.ZERO: (
            "S (x) V = wall_out S",
            "0 < F2 < F1 < T with F2 simple socle S_2 and T/F1 simple top S_1",
            "F1/F2 is killed by wall_on (strictly smaller GK dimension; tag only, not computed)",
        ),
    }[cls]
    return Sl2TensorCase(lambda_i, cls, outcome, identity, notes)


def sl2_zero_case_in_block(table: KLTable | None = None) -> dict[str, GrothendieckVector]:
    """The ``lambda_i = 0`` identity inside the ``A_1`` block model.

    ``lambda = 0`` is the singular weight, ``lambda + e`` the dominant regular
    weight (index ``e``) and ``lambda - e`` the antidominant one (index ``s``).
    Returns ``Delta_{l+e} + Delta_{l-e}``, ``wall_out Delta^J``, and the
    projective ``P_{l-e} = theta_s Delta_e``, all in the regular Verma basis,
    plus the latter's Simple-basis character.
    """
    table = table or KLTable.build("A1")
    if table.system.cartan.families != ("A",) or table.system.rank != 1:
        raise UsageError("the sl_2 block model needs type A1")
    O = CategoryO(table)
    e, s = table.system.identity, table.system.generators[0]
    sing = O.singular([1])
    two_vermas = O.verma(O.regular, e) + O.verma(O.regular, s)
    tensor = O.apply_functor(O.wall_out([1]), O.verma(sing, s))
    projective = O.apply_functor(O.theta(s), O.verma(O.regular, e))
    return {
        "sum_of_vermas": two_vermas,
        "wall_out_verma": tensor,
        "projective": projective,
        "projective_simple": O.verma_to_simple(projective),
    }
