"""Dimensions of the Atkin-Lehner eigenspaces of weight-2 cusp forms on Gamma_0(p)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .classnum import class_number_table
from .primes import RANGE_HI, is_prime

Mode = Literal["exact", "approximate"]

# Class-number tables are built in a few fixed sizes so repeated calls share one table.
_TABLE_SIZES = (4 * 10**5, 4 * RANGE_HI)


@dataclass(frozen=True)
class DimSplit:
    """``dim_plus`` / ``dim_minus``: dimensions of the w_p = +1 / -1 subspaces."""

    p: int
    dim_plus: float
    dim_minus: float
    mode: str = "exact"

    @property
    def difference(self) -> float:
        return self.dim_minus - self.dim_plus

    @property
    def total(self) -> float:
        return self.dim_plus + self.dim_minus


def genus_x0(p: int) -> int:
    """Genus of X_0(p) for prime ``p``."""
    if p in (2, 3):
        return 0
    nu2 = 2 if p % 4 == 1 else 0
    nu3 = 2 if p % 3 == 1 else 0
    g12 = p + 1 - 3 * nu2 - 4 * nu3
    assert g12 % 12 == 0
    return g12 // 12


def _table_for(n: int) -> np.ndarray:
    for size in _TABLE_SIZES:
        if n <= size:
            return class_number_table(size)
    return class_number_table(n)


def fricke_fixed_points(p: int, table: np.ndarray | None = None) -> int:
    """Number of fixed points of the Fricke involution on X_0(p), p > 3.

    Equal to h(-4p) + h(-p) when p = 3 mod 4 and h(-4p) otherwise, where h
    counts classes of primitive forms (so h(-4p) is an order class number).
    """
    h = _table_for(4 * p) if table is None else table
    r = int(h[4 * p])
    if p % 4 == 3:
        r += int(h[p])
    return r


def _exact(p: int, table: np.ndarray | None) -> DimSplit:
    if p < 5:
        return DimSplit(p, 0, 0, "exact")
    g = genus_x0(p)
    r = fricke_fixed_points(p, table)
    # Riemann-Hurwitz for X_0(p) -> X_0(p)/w_p: 2g - 2 = 2(2g+ - 2) + r.
    num = 2 * g + 2 - r
    if num % 4:
        raise ArithmeticError(f"inconsistent Fricke fixed-point count at p={p}")
    gp = num // 4
    return DimSplit(p, gp, g - gp, "exact")


def dim_split(p: int, mode: Mode = "exact") -> DimSplit:
    """Dimension split at prime level ``p``.

    ``approximate`` returns the leading terms p/24 -/+ sqrt(p)/2 as floats.
    """
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if mode == "exact":
        return _exact(p, None)
    if mode == "approximate":
        half = math.sqrt(p) / 2
        return DimSplit(p, p / 24 - half, p / 24 + half, "approximate")
    raise ValueError(f"unknown mode {mode!r}")


def dim_splits(primes, mode: Mode = "exact") -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``(dim_plus, dim_minus)`` arrays for an array of primes.

    The input is trusted to consist of primes.
    """
    ps = np.asarray(primes, dtype=np.int64)
    if mode == "approximate":
        half = np.sqrt(ps) / 2
        return ps / 24 - half, ps / 24 + half
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if len(ps) == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    h = _table_for(4 * int(ps.max()))
    nu2 = np.where(ps % 4 == 1, 2, 0)
    nu3 = np.where(ps % 3 == 1, 2, 0)
    g = (ps + 1 - 3 * nu2 - 4 * nu3) // 12
    r = h[4 * ps].astype(np.int64) + np.where(ps % 4 == 3, h[ps], 0)
    gp = (2 * g + 2 - r) // 4
    small = ps < 5
    g[small] = 0
    gp[small] = 0
    return gp, g - gp
