"""Genus-2 families with real multiplication: Brumer (RM 5) and Mestre (RM 8)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .. import ComputeError
from ..arith.poly import discriminant, poly_mul, trim
from ..arith.primes import is_prime
from .igusa import IgusaClebsch, igusa_clebsch

# disc(Q^2 + 4P) = 2^12 * (model discriminant) for y^2 + Q y = P; the constant
# is re-derived at d = 0 in the tests.
MODEL_DISC_SHIFT = 12

MESTRE_EXCLUDED = (-88, 112)


@dataclass(frozen=True)
class HyperellipticModel:
    """``y^2 + Q(x) y = P(x)``; coefficient lists are low degree first."""

    Q: tuple[int, ...]
    P: tuple[int, ...]

    def __post_init__(self):
        if len(trim(self.Q)) > 4 or len(trim(self.P)) > 7:
            raise ValueError("need deg Q <= 3 and deg P <= 6")
        h = self.sextic()
        if len(h) - 1 not in (5, 6):
            raise ValueError("Q^2 + 4P must have degree 5 or 6")
        if discriminant(h) == 0:
            raise ComputeError("singular model: Q^2 + 4P has a repeated root")

    def sextic(self) -> list[int]:
        """``h = Q^2 + 4P``, so that the curve is ``(2y + Q)^2 = h``."""
        q2 = poly_mul(list(self.Q), list(self.Q)) if self.Q else []
        n = max(len(q2), len(self.P))
        q2 += [0] * (n - len(q2))
        p = list(self.P) + [0] * (n - len(self.P))
        return trim([a + 4 * b for a, b in zip(q2, p)])

    def igusa_clebsch(self) -> IgusaClebsch:
        return igusa_clebsch(self.sextic())

    def discriminant(self) -> int:
        """``2^-12 * I10``, where I10 is the binary-sextic discriminant of h."""
        d = self.igusa_clebsch().I10
        if d % (1 << MODEL_DISC_SHIFT):
            raise ArithmeticError("discriminant not divisible by the expected 2-power")
        return d // (1 << MODEL_DISC_SHIFT)


def brumer_core(d: int) -> int:
    """``27 d^3 - 81 d^2 - 34 d - 103``."""
    return 27 * d**3 - 81 * d**2 - 34 * d - 103


def brumer_curve(d: int) -> HyperellipticModel:
    """``y^2 + (x^3 + x + 1) y = -d x^3 + x^2 + x``."""
    return HyperellipticModel((1, 1, 0, 1), (0, 1, 1, -int(d)))


def brumer_disc(d: int) -> int:
    return brumer_curve(d).discriminant()


def mestre_curve(b: int) -> HyperellipticModel:
    """``y^2 = 7500 x^5 + (3400 - 75b) x^4 + (2283 - 34b) x^3 + (1111 - 3b) x^2 + 177 x + 9``."""
    b = int(b)
    if b in MESTRE_EXCLUDED:
        raise ComputeError(f"b = {b} gives a singular curve")
    return HyperellipticModel((), (9, 177, 1111 - 3 * b, 2283 - 34 * b, 3400 - 75 * b, 7500))


def mestre_disc(b: int) -> int:
    return mestre_curve(b).discriminant()


def nonsplit_certificate(family: Literal["brumer", "mestre"], param: int) -> bool:
    """Congruence condition under which the Jacobian is known to be nonsplit.

    Brumer: d = 1 mod 5, and then the discriminant must also be prime to 5.
    Mestre: b = 1 mod 7.
    """
    param = int(param)
    if family == "brumer":
        if param % 5 != 1:
            return False
        if brumer_disc(param) % 5 == 0:
            raise ArithmeticError(f"d={param}: discriminant divisible by 5")
        return True
    if family == "mestre":
        return param % 7 == 1
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class PrimeDiscSearch:
    bound: int
    params: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.params)

    @property
    def density_ratio(self) -> float:
        """count / (X / log X); undefined (nan) for X < 3."""
        if self.bound < 3:
            return math.nan
        return self.count / (self.bound / math.log(self.bound))


def prime_disc_search(bound: int) -> PrimeDiscSearch:
    """All ``1 <= d <= bound`` with d = 1 mod 5 and ``|brumer_core(d)|`` prime."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    hits = tuple(d for d in range(1, bound + 1, 5) if is_prime(abs(brumer_core(d))))
    return PrimeDiscSearch(bound, hits)
