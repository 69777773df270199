"""Igusa-Clebsch invariants of binary sextics (genus-2 curves y^2 = h(x))."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .. import ComputeError
from ..arith.poly import discriminant, poly_mul, trim
from ._ic_tables import I2_TERMS, I4_TERMS, I6_TERMS

WEIGHTS = (1, 2, 3, 5)


def _eval_terms(terms: dict, a: Sequence[int]) -> int:
    total = 0
    for exps, c in terms.items():
        t = c
        for ai, e in zip(a, exps):
            if e:
                t *= ai**e
        total += t
    return total


@dataclass(frozen=True)
class IgusaClebsch:
    """A point ``(I2 : I4 : I6 : I10)`` of weighted projective space P(1,2,3,5)."""

    I2: int
    I4: int
    I6: int
    I10: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.I2, self.I4, self.I6, self.I10)

    def rescale(self, u) -> "IgusaClebsch":
        """Multiply componentwise by ``(u, u^2, u^3, u^5)``."""
        vals = [v * u**w for v, w in zip(self.as_tuple(), WEIGHTS)]
        if any(isinstance(v, Fraction) and v.denominator != 1 for v in vals):
            raise ValueError("rescaling leaves the integers")
        return IgusaClebsch(*(int(v) for v in vals))

    def absolute_invariants(self) -> tuple[Fraction, Fraction, Fraction]:
        """``(I2^5/I10, I2^3 I4/I10, I2^2 I6/I10)``: constant on weighted-projective classes."""
        if self.I10 == 0:
            raise ComputeError("I10 = 0")
        return (
            Fraction(self.I2**5, self.I10),
            Fraction(self.I2**3 * self.I4, self.I10),
            Fraction(self.I2**2 * self.I6, self.I10),
        )

    def equivalent(self, other: "IgusaClebsch") -> bool:
        """Weighted-projective equality over the algebraic closure."""
        a, b = self.as_tuple(), other.as_tuple()
        # (x_i)^(w_j) (y_j)^(w_i) = (y_i)^(w_j) (x_j)^(w_i) for all pairs i < j.
        for i in range(4):
            if (a[i] == 0) != (b[i] == 0):
                return False
            for j in range(i + 1, 4):
                wi, wj = WEIGHTS[i], WEIGHTS[j]
                if a[i] ** wj * b[j] ** wi != b[i] ** wj * a[j] ** wi:
                    return False
        return True


def igusa_clebsch(h: Sequence[int]) -> IgusaClebsch:
    """Igusa-Clebsch invariants of ``y^2 = h(x)``, ``h = sum h[i] x^i`` of degree 5 or 6.

    Computed from closed-form integer polynomials in the coefficients, so the
    result is exact.  I10 is the discriminant of h viewed as a binary sextic:
    for degree 6 this is the usual polynomial discriminant and for degree 5
    it is ``h[5]^2 * disc(h)``.  With these formulas, replacing h by ``c*h``
    multiplies the tuple by ``(c^2, c^4, c^6, c^10)``.
    """
    p = trim([int(c) for c in h])
    deg = len(p) - 1
    if deg not in (5, 6):
        raise ValueError(f"expected a quintic or sextic, got degree {deg}")
    a = p + [0] * (7 - len(p))
    I10 = discriminant(p)
    if deg == 5:
        I10 *= a[5] ** 2
    if I10 == 0:
        raise ComputeError("singular curve: h has a repeated root")
    return IgusaClebsch(_eval_terms(I2_TERMS, a), _eval_terms(I4_TERMS, a), _eval_terms(I6_TERMS, a), I10)


def transform_sextic(h: Sequence[int], alpha: int, beta: int, gamma: int, delta: int) -> list[int]:
    """``(gamma x + delta)^6 h((alpha x + beta)/(gamma x + delta))`` as a binary sextic."""
    a = list(h) + [0] * (7 - len(h))
    num = [beta, alpha]
    den = [delta, gamma]
    out = [0] * 7
    for i, c in enumerate(a):
        if not c:
            continue
        term = [c]
        for _ in range(i):
            term = poly_mul(term, num)
        for _ in range(6 - i):
            term = poly_mul(term, den)
        for k, v in enumerate(term):
            out[k] += v
    return out


def isomorphism_obstruction(c1: IgusaClebsch, c2: IgusaClebsch) -> int:
    """``I2'^2 I4 - I2^2 I4'``; nonzero proves the curves are not isomorphic.

    Vanishes whenever the tuples are weighted rescalings of each other.
    """
    return c2.I2**2 * c1.I4 - c1.I2**2 * c2.I4

