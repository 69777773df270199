"""Newform orbit records and their validation rules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .. import ValidationError
from ..arith.poly import discriminant
from ..arith.primes import is_prime

LARGE = "large"

# Levels above this bound must carry one of KNOWN_DISCRIMINANTS.
CLOSED_LIST_FROM = 10**4

# Field discriminants that occur for each degree (one totally real field each).
KNOWN_DISCRIMINANTS: dict[int, tuple[int, ...]] = {
    1: (1,),
    2: (5, 8, 12, 13, 17, 21),
    3: (49, 229, 148, 81, 257, 169, 321),
    4: (725, 1957, 2777, 8768),
    5: (70601, 14641),
    6: (371293,),
}

DISC_DEGREE = {d: deg for deg, ds in KNOWN_DISCRIMINANTS.items() for d in ds}


@dataclass(frozen=True)
class Subfield:
    """A proper subfield ``M = Q[y]/(poly)`` embedded in K.

    ``embedding`` row i holds the K power-basis coordinates of ``y^i``,
    scaled by ``denominator``.
    """

    poly: tuple[int, ...]
    embedding: tuple[tuple[int, ...], ...]
    denominator: int = 1

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def rows(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(v, self.denominator) for v in row) for row in self.embedding]


@dataclass(frozen=True)
class NewformRecord:
    """One Galois orbit of newforms.

    ``degree`` is an int 1..6 or the marker ``"large"`` for the residual orbit
    of an Atkin-Lehner eigenspace; large records carry no field data.
    """

    level: int
    orbit: int
    degree: int | str
    disc: int | None
    al_sign: int
    field_poly: tuple[int, ...] | None
    subfields: tuple[Subfield, ...] = field(default=(), compare=False)

    @property
    def key(self) -> tuple[int, int]:
        return (self.level, self.orbit)

    @property
    def is_large(self) -> bool:
        return self.degree == LARGE

    @property
    def root_number(self) -> int:
        return -self.al_sign


def validate_record(rec: NewformRecord, check_field: bool = True) -> None:
    """Raise ValidationError if ``rec`` violates a record invariant."""
    where = f"record level={rec.level} orbit={rec.orbit}"
    if not is_prime(rec.level):
        raise ValidationError(f"{where}: level is not prime")
    if rec.al_sign not in (1, -1):
        raise ValidationError(f"{where}: al_sign must be +1 or -1")
    if rec.orbit < 0:
        raise ValidationError(f"{where}: negative orbit index")
    if rec.is_large:
        if rec.disc is not None or rec.field_poly is not None:
            raise ValidationError(f"{where}: large orbit must not carry field data")
        return
    if not isinstance(rec.degree, int) or rec.degree not in KNOWN_DISCRIMINANTS:
        raise ValidationError(f"{where}: degree must be 1..6 or '{LARGE}'")
    if rec.field_poly is None or len(rec.field_poly) - 1 != rec.degree:
        raise ValidationError(f"{where}: degree does not match field polynomial")
    if rec.field_poly[-1] != 1:
        raise ValidationError(f"{where}: field polynomial must be monic")
    if not isinstance(rec.disc, int) or rec.disc < 1:
        raise ValidationError(f"{where}: discriminant must be a positive integer")
    # The closed discriminant list only covers levels above CLOSED_LIST_FROM.
    if rec.level > CLOSED_LIST_FROM and rec.disc not in KNOWN_DISCRIMINANTS[rec.degree]:
        raise ValidationError(f"{where}: discriminant {rec.disc} not expected in degree {rec.degree}")
    if check_field and rec.degree > 1:
        _check_field(rec, where)
    for sf in rec.subfields:
        _check_subfield(rec, sf, where)


def _check_field(rec: NewformRecord, where: str) -> None:
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(rec.field_poly)), x)
    if not poly.is_irreducible:
        raise ValidationError(f"{where}: field polynomial is reducible")
    # disc(poly) = disc(K) * index^2
    d = discriminant(list(rec.field_poly))
    if d % rec.disc:
        raise ValidationError(f"{where}: polynomial discriminant {d} not divisible by {rec.disc}")
    q = d // rec.disc
    if q <= 0 or math.isqrt(q) ** 2 != q:
        raise ValidationError(f"{where}: polynomial discriminant / field discriminant is not a square")


def _check_subfield(rec: NewformRecord, sf: Subfield, where: str) -> None:
    if sf.degree >= rec.degree or rec.degree % sf.degree:
        raise ValidationError(f"{where}: subfield degree {sf.degree} is not a proper divisor")
    if len(sf.embedding) != sf.degree or any(len(r) != rec.degree for r in sf.embedding):
        raise ValidationError(f"{where}: embedding matrix must be {sf.degree} x {rec.degree}")
    mat = sympy.Matrix([list(r) for r in sf.embedding])
    if mat.rank() != sf.degree:
        raise ValidationError(f"{where}: subfield embedding is not injective")


def parse_poly(text: str) -> tuple[int, ...]:
    """``"c0;c1;...;cd"`` to a coefficient tuple."""
    return tuple(int(t) for t in text.split(";"))


def format_poly(poly: Sequence[int]) -> str:
    return ";".join(str(int(c)) for c in poly)
