"""Exact arithmetic in a number field ``Q[x]/(f)`` on power-basis coordinate vectors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import sympy

from .poly import trim

Vector = tuple  # power-basis coordinates, ints or Fractions


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class NumberField:
    """``K = Q(theta)`` with ``theta`` a root of the monic integer polynomial ``poly``."""

    poly: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(c) for c in trim(self.poly))
        if len(p) < 2 or p[-1] != 1:
            raise ValueError("field polynomial must be monic of degree >= 1")
        object.__setattr__(self, "poly", p)
        x = sympy.Symbol("x")
        if not sympy.Poly(list(reversed(p)), x).is_irreducible:
            raise ValueError(f"{p} is not irreducible")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @cached_property
    def _powers(self) -> list[list[int]]:
        """Coordinates of theta^k for k < 2n - 1."""
        n = self.degree
        out = []
        for k in range(2 * n - 1):
            if k < n:
                v = [0] * n
                v[k] = 1
            else:
                prev = out[-1]
                top = prev[-1]
                v = [0] + prev[:-1]
                for i in range(n):
                    v[i] -= top * self.poly[i]
            out.append(v)
        return out

    def one(self) -> Vector:
        return (1,) + (0,) * (self.degree - 1)

    def from_int(self, m: int) -> Vector:
        return (m,) + (0,) * (self.degree - 1)

    def mul(self, a: Vector, b: Vector) -> Vector:
        n = self.degree
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = [0] * n
        powers = self._powers
        for k, c in enumerate(prod):
            if c:
                pk = powers[k]
                for i in range(n):
                    out[i] += c * pk[i]
        return tuple(out)

    def add(self, a: Vector, b: Vector) -> Vector:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Vector, b: Vector) -> Vector:
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a: Vector, m) -> Vector:
        return tuple(x * m for x in a)

    def mult_matrix(self, a: Vector) -> list[list]:
        """Matrix M with ``M @ coords(b) = coords(a b)`` (columns are a * theta^j)."""
        n = self.degree
        cols = [self.mul(a, tuple(1 if i == j else 0 for i in range(n))) for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self, a: Vector):
        m = self.mult_matrix(a)
        den = 1
        for row in m:
            for v in row:
                if isinstance(v, Fraction):
                    den = den * v.denominator // _gcd(den, v.denominator)
        if den == 1:
            return bareiss_det(m)
        return Fraction(bareiss_det([[int(v * den) for v in row] for row in m]), den**self.degree)

    def trace(self, a: Vector):
        m = self.mult_matrix(a)
        return sum(m[i][i] for i in range(self.degree))

    def charpoly(self, a: Vector) -> list:
        """Characteristic polynomial of multiplication by ``a``, low degree first."""
        lam = sympy.Symbol("lam")
        cp = sympy.Matrix(self.mult_matrix(a)).charpoly(lam)
        return [sympy.Rational(c) if not c.is_integer else int(c) for c in reversed(cp.all_coeffs())]

    def is_rational(self, a: Vector) -> bool:
        return all(x == 0 for x in a[1:])


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class Subspace:
    """Rational subspace of K given by spanning coordinate vectors, with an exact membership test."""

    span: tuple[tuple, ...]
    annihilator: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ambient_dim: int) -> "Subspace":
        mat = sympy.Matrix([[sympy.Rational(v) for v in r] for r in rows]) if rows else sympy.zeros(0, ambient_dim)
        if rows and mat.rank() != len(rows):
            raise ValueError("spanning rows are linearly dependent")
        null = mat.nullspace() if rows else [sympy.eye(ambient_dim)[:, i] for i in range(ambient_dim)]
        ann = []
        for vec in null:
            den = sympy.ilcm(*[sympy.Rational(v).q for v in vec]) if len(vec) else 1
            ints = [int(v * den) for v in vec]
            g = 0
            for v in ints:
                g = _gcd(g, v)
            ann.append(tuple(v // g for v in ints) if g else tuple(ints))
        return cls(tuple(tuple(r) for r in rows), tuple(ann))

    def contains(self, a: Vector) -> bool:
        return all(sum(c * x for c, x in zip(row, a)) == 0 for row in self.annihilator)
