"""
Sparse Laurent polynomials with integer coefficients in one variable.

>>> v = LaurentPoly.var()
>>> (v + v**-1) ** 2
v^-2 + 2 + v^2
>>> ((v + v**-1) ** 2)(1)
4
"""

from __future__ import annotations

from typing import Mapping

__all__ = ["LaurentPoly"]


class LaurentPoly:
    """Immutable ``{exponent: coefficient}`` map with no zero coefficients.

    ``name`` only affects printing; KL polynomials are printed in ``q`` and
    Hecke coefficients in ``v`` with ``v^2 = q``.
    """

    __slots__ = ("_c", "name", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | int | None = None, name: str = "v"):
        if coeffs is None:
            c = {}
        elif isinstance(coeffs, int):
            c = {0: coeffs} if coeffs else {}
        else:
            c = {int(k): int(a) for k, a in coeffs.items() if a}
        self._c = c
        self.name = name
        self._hash = None

    @classmethod
    def var(cls, name: str = "v") -> LaurentPoly:
        return cls({1: 1}, name)

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1, name: str = "v") -> LaurentPoly:
        return cls({exp: coeff}, name)

    @classmethod
    def from_coeffs(cls, coeffs, start: int = 0, step: int = 1, name: str = "v") -> LaurentPoly:
        """Dense coefficient list; ``coeffs[k]`` sits at exponent ``start + step*k``."""
        return cls({start + step * k: a for k, a in enumerate(coeffs)}, name)

    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def __bool__(self):
        return bool(self._c)

    @property
    def degree(self) -> int | None:
        return max(self._c) if self._c else None

    @property
    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def _coerce(self, other) -> LaurentPoly | None:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly(other, self.name)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for k, a in o._c.items():
            c[k] = c.get(k, 0) + a
        return LaurentPoly(c, self.name)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -a for k, a in self._c.items()}, self.name)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c: dict[int, int] = {}
        for k, a in self._c.items():
            for l, b in o._c.items():
                c[k + l] = c.get(k + l, 0) + a * b
        return LaurentPoly(c, self.name)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials are invertible")
            (k, a), = self._c.items()
            if a not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return LaurentPoly({k * n: a ** (-n)}, self.name)
        out = LaurentPoly(1, self.name)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by the monomial of exponent ``k``."""
        return LaurentPoly({e + k: a for e, a in self._c.items()}, self.name)

    def bar(self) -> LaurentPoly:
        """Substitute the variable by its inverse."""
        return LaurentPoly({-k: a for k, a in self._c.items()}, self.name)

    def __call__(self, x):
        if x == 1:
            return sum(self._c.values())
        return sum(a * x**k for k, a in self._c.items())

    def is_nonnegative(self) -> bool:
        return all(a > 0 for a in self._c.values())

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def _format(self, spaced: bool) -> str:
        if not self._c:
            return "0"
        plus, minus = (" + ", " - ") if spaced else ("+", "-")
        s = ""
        for i, (k, a) in enumerate(self.items()):
            if k == 0:
                mono = str(abs(a))
            else:
                x = self.name if k == 1 else f"{self.name}^{k}"
                mono = x if abs(a) == 1 else f"{abs(a)}{x}"
            if i == 0:
                s = ("-" if a < 0 else "") + mono
            else:
                s += (minus if a < 0 else plus) + mono
        return s

    def __str__(self):
        return self._format(spaced=False)

    def __repr__(self):
        return self._format(spaced=True)
