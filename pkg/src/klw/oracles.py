"""
Independent cross-checks for the KL engine.

Nothing here uses the mu-recursion of :mod:`klw.hecke`:

* :func:`kl_by_bar_inversion` solves for the canonical basis directly from
  the bar involution on the normalized standard basis ``H_w = v^{-l(w)} T_w``.
* :func:`structure_constants_q1_dense` multiplies ``C'_x(1) C'_y(1)`` inside
  the group ring with dense integer matrices and solves the unitriangular
  system for the ``C'``-coordinates.
"""

from __future__ import annotations

import numpy as np

from .coxeter import CoxeterSystem
from .laurent import LaurentPoly

__all__ = ["bar_matrix", "kl_by_bar_inversion", "structure_constants_q1_dense", "unitriangular_inverse"]

_V = LaurentPoly.var()
_GAP = _V - _V**-1  # H_s^2 = 1 + (v - v^-1) H_s


def _rmul_H(terms: dict[int, LaurentPoly], rm: list[int], L: list[int]) -> dict[int, LaurentPoly]:
    out: dict[int, LaurentPoly] = {}
    for x, c in terms.items():
        xs = rm[x]
        out[xs] = out.get(xs, 0) + c
        if L[xs] < L[x]:
            out[x] = out.get(x, 0) + c * _GAP
    return {k: c for k, c in out.items() if c}


def bar_matrix(system: CoxeterSystem) -> list[dict[int, LaurentPoly]]:
    """``bar(H_w) = sum_x r[w][x] H_x`` with ``bar(H_s) = H_s - (v - v^-1)``."""
    ix = system.indexed
    L = ix.lengths
    r: list[dict[int, LaurentPoly]] = [{} for _ in ix.elements]
    r[0] = {0: LaurentPoly(1)}
    for w in range(1, len(ix.elements)):
        g = ix.words[w][-1] - 1
        wp = ix.rmul[g][w]
        prod = _rmul_H(r[wp], ix.rmul[g], L)
        for x, c in r[wp].items():
            nv = prod.get(x, 0) - c * _GAP
            if nv:
                prod[x] = nv
            else:
                prod.pop(x, None)
        r[w] = prod
    return r


def kl_by_bar_inversion(system: CoxeterSystem) -> dict[tuple[int, int], tuple[int, ...]]:
    """``{(x, w): q-coefficients of P_{x,w}}`` for all nonzero ``P``, by element index.

    ``C'_w = sum_x c_x H_x`` with ``c_w = 1`` and ``c_x`` in ``v^-1 Z[v^-1]``;
    bar invariance gives ``c_x - bar(c_x) = sum_{y != x} bar(c_y) r[y][x]``,
    whose negative-degree part is ``c_x``.
    """
    ix = system.indexed
    L = ix.lengths
    n = len(ix.elements)
    r = bar_matrix(system)
    # column access: which y have r[y][x] != 0
    cols: list[list[tuple[int, LaurentPoly]]] = [[] for _ in range(n)]
    for y in range(n):
        for x, c in r[y].items():
            if x != y:
                cols[x].append((y, c))
    out: dict[tuple[int, int], tuple[int, ...]] = {}
    for w in range(n):
        c = {w: LaurentPoly(1)}
        for x in sorted(range(n), key=lambda k: -L[k]):
            if L[x] >= L[w]:
                continue
            rhs = LaurentPoly()
            for y, ryx in cols[x]:
                cy = c.get(y)
                if cy:
                    rhs = rhs + cy.bar() * ryx
            neg = LaurentPoly({k: a for k, a in rhs.coeffs().items() if k < 0})
            if rhs != neg - neg.bar():
                raise ArithmeticError(f"bar-invariance fails at x={x}, w={w}")
            if neg:
                c[x] = neg
        for x, cx in c.items():
            p = cx.shift(L[w] - L[x])
            coeffs = p.coeffs()
            if any(k % 2 or k < 0 for k in coeffs):
                raise ArithmeticError(f"P_{{{x},{w}}} is not a polynomial in q")
            top = max(coeffs) // 2
            out[(x, w)] = tuple(coeffs.get(2 * k, 0) for k in range(top + 1))
    return out


def unitriangular_inverse(m: np.ndarray) -> np.ndarray:
    """Exact inverse of an integer matrix ``I + N`` with ``N`` nilpotent."""
    n = m.shape[0]
    nil = np.eye(n, dtype=np.int64) - m.astype(np.int64)
    inv = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    for _ in range(n):
        term = term @ nil
        if not term.any():
            break
        inv = inv + term
    return inv


def structure_constants_q1_dense(system: CoxeterSystem, kl_at_one: np.ndarray) -> np.ndarray:
    """``h[x, y, z]`` at ``q = 1`` from dense group-ring products.

    ``kl_at_one[u, w] = P_{u,w}(1)`` (zero unless ``u <= w``) gives
    ``C'_w(1) = sum_u P_{u,w}(1) u`` in the group ring.
    """
    ix = system.indexed
    n = len(ix.elements)
    els = ix.elements
    mult = np.array([[ix.index[(a * b).data] for b in els] for a in els], dtype=np.int64)
    cmat = np.asarray(kl_at_one, dtype=np.int64)
    cinv = unitriangular_inverse(cmat)
    h = np.zeros((n, n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            prod = np.zeros(n, dtype=np.int64)
            np.add.at(prod, mult.ravel(), np.outer(cmat[:, x], cmat[:, y]).ravel())
            h[x, y] = cinv @ prod
    return h
