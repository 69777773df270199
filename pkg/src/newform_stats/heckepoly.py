"""Counting integer polynomials whose roots obey a Weil-type bound.

``h(n)`` is the number of monic degree-n integer polynomials all of whose
complex roots satisfy ``|z| <= R`` with ``R = 2 p^(k - 1/2)``, i.e.
``|z|^2 <= M`` with ``M = 4 p^(2k-1)`` an integer.  The totally-real variant
additionally requires every root to be real.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from . import ComputeError
from .arith.poly import count_roots_in_sqrt_interval, roots_on_circle, squarefree_part
from .arith.primes import is_prime

log = logging.getLogger(__name__)

MAX_DEGREE = 6

# Relative slack used by the floating-point stages.  A root of multiplicity m
# is perturbed by about eps^(1/m) ~ 2.5e-3 for m = 6, so the slack must exceed
# that; anything inside the slack band is decided exactly.
_PRUNE_SLACK = 1e-2
_FINE_SLACK = 1e-9
_TIGHT_SLACK = 1e-7
_SEPARATION = 5e-2


@dataclass(frozen=True)
class HnSpec:
    n: int
    p: int
    k: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("degree must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def M(self) -> int:
        """Squared root bound ``4 p^(2k-1)``."""
        return 4 * self.p ** (2 * self.k - 1)

    @property
    def R(self) -> float:
        return math.sqrt(self.M)


def _max_root_moduli(coeffs: np.ndarray) -> np.ndarray:
    """Max root modulus of ``z^m + c1 z^(m-1) + ... + cm`` for each row ``(c1..cm)``."""
    N, m = coeffs.shape
    if m == 1:
        return np.abs(coeffs[:, 0]).astype(float)
    comp = np.zeros((N, m, m))
    comp[:, 0, :] = -coeffs
    comp[:, np.arange(1, m), np.arange(0, m - 1)] = 1.0
    return np.abs(np.linalg.eigvals(comp)).max(axis=1)


def _chunks(n: int, size: int = 200_000):
    for lo in range(0, n, size):
        yield slice(lo, min(lo + size, n))


def _stage_filter(cand: np.ndarray, n: int, R: float) -> np.ndarray:
    """Keep prefixes ``c1..cm`` whose (n-m)-th derivative may have all roots in the disk.

    By Gauss-Lucas the roots of every derivative lie in the convex hull of the
    roots, so this never discards a valid polynomial.  The derivative's
    normalized coefficients are ``c_i * C(m,i) / C(n,i)``.
    """
    m = cand.shape[1]
    scale = np.array([math.comb(m, i) / math.comb(n, i) for i in range(1, m + 1)])
    keep = np.zeros(len(cand), dtype=bool)
    for sl in _chunks(len(cand)):
        keep[sl] = _max_root_moduli(cand[sl] * scale) <= R * (1 + _PRUNE_SLACK)
    return cand[keep]


def _sign_prefilter(cand: np.ndarray, n: int, R: float) -> np.ndarray:
    """A monic polynomial with all roots in |z| <= R is positive at x > R and has sign (-1)^n at x < -R."""
    x = R * (1 + _PRUNE_SLACK)
    m = cand.shape[1]
    pos = np.full(len(cand), x**n)
    neg = np.full(len(cand), (-x) ** n)
    for i in range(m):
        pos += cand[:, i] * x ** (n - 1 - i)
        neg += cand[:, i] * (-x) ** (n - 1 - i)
    ok = (pos > 0) & (neg * (-1) ** n > 0)
    return cand[ok]


def _to_int_poly(row) -> list[int]:
    """Row ``(c1..cn)`` to a low-degree-first integer coefficient list."""
    return [int(c) for c in reversed(row)] + [1]


def _in_disk_exact(poly: list[int], M: int) -> bool:
    """Exact decision: all roots of ``poly`` satisfy ``|z|^2 <= M``."""
    sf = squarefree_part(poly)
    if len(sf) <= 1:
        return True
    roots = np.roots(list(reversed([float(c) for c in sf])))
    mod2 = np.abs(roots) ** 2
    if np.all(mod2 < M * (1 - _FINE_SLACK)):
        return True
    if np.any(mod2 > M * (1 + _FINE_SLACK)):
        return False
    band = int(np.sum(np.abs(mod2 - M) <= M * _FINE_SLACK))
    on = roots_on_circle(sf, M)
    if on == band:
        return True
    # Some root is within the float band but provably off the circle:
    # separate with high precision.
    for dps in (50, 120, 300):
        with mpmath.workdps(dps):
            rts = mpmath.polyroots(list(reversed(sf)), maxsteps=400, extraprec=4 * dps)
            d = [abs(r) ** 2 - M for r in rts]
            tol = mpmath.mpf(10) ** (-(dps // 2))
            near = [x for x in d if abs(x) <= tol]
            if len(near) == on:
                return all(x <= tol for x in d)
    raise ComputeError(f"could not certify root moduli for {poly}")


def _final_disk(cand: np.ndarray, n: int, M: int) -> np.ndarray:
    R = math.sqrt(M)
    keep = np.zeros(len(cand), dtype=bool)
    for sl in _chunks(len(cand)):
        rows = cand[sl].astype(float)
        comp = np.zeros((len(rows), n, n))
        comp[:, 0, :] = -rows
        comp[:, np.arange(1, n), np.arange(0, n - 1)] = 1.0
        ev = np.linalg.eigvals(comp)
        r = np.abs(ev).max(axis=1)
        clear = r < R * (1 - _PRUNE_SLACK)
        band = ~clear & (r <= R * (1 + _PRUNE_SLACK))
        # Well-separated roots are accurate to ~1e-12 relative, so the float
        # answer is trusted outside a tight band around the circle.
        gaps = np.abs(ev[:, :, None] - ev[:, None, :])
        gaps[:, np.arange(n), np.arange(n)] = np.inf
        separated = gaps.min(axis=(1, 2)) > _SEPARATION * R
        tight = np.abs(r - R) <= _TIGHT_SLACK * R
        sub = keep[sl]
        sub[clear] = True
        easy = band & separated & ~tight
        sub[easy] = r[easy] <= R
        for i in np.flatnonzero(band & ~easy):
            sub[i] = _in_disk_exact(_to_int_poly(cand[sl][i]), M)
        keep[sl] = sub
    return cand[keep]


def _totally_real(cand: np.ndarray, M: int) -> np.ndarray:
    """Rows whose polynomial has all roots real and in ``[-sqrt(M), sqrt(M)]`` (exact Sturm)."""
    n = cand.shape[1]
    keep = np.zeros(len(cand), dtype=bool)
    R = math.sqrt(M)
    for sl in _chunks(len(cand)):
        rows = cand[sl]
        if n == 1:
            keep[sl] = True
            continue
        comp = np.zeros((len(rows), n, n))
        comp[:, 0, :] = -rows
        comp[:, np.arange(1, n), np.arange(0, n - 1)] = 1.0
        ev = np.linalg.eigvals(comp)
        maybe = np.all(np.abs(ev.imag) <= _PRUNE_SLACK * R, axis=1)
        sub = keep[sl]
        for i in np.flatnonzero(maybe):
            sub[i] = count_roots_in_sqrt_interval(_to_int_poly(rows[i]), M) == n
        keep[sl] = sub
    return cand[keep]


def enumerate_hn(spec: HnSpec, totally_real: bool = False) -> np.ndarray:
    """All qualifying polynomials as rows ``(c1, ..., cn)`` of ``x^n + c1 x^(n-1) + ... + cn``."""
    n = spec.n
    if n > MAX_DEGREE:
        raise ComputeError(f"exact enumeration is limited to degree <= {MAX_DEGREE}")
    M = spec.M
    R = spec.R
    pref = np.zeros((1, 0), dtype=np.int64)
    for m in range(1, n + 1):
        # Coefficient bound |c_m| <= C(n, m) R^m, i.e. c_m^2 <= C(n,m)^2 M^m.
        bound = math.isqrt(math.comb(n, m) ** 2 * M**m)
        vals = np.arange(-bound, bound + 1, dtype=np.int64)
        cand = np.concatenate(
            [np.repeat(pref, len(vals), axis=0), np.tile(vals, len(pref))[:, None]], axis=1
        )
        if m == n:
            cand = _sign_prefilter(cand, n, R)
            pref = _final_disk(cand, n, M)
        else:
            pref = _stage_filter(cand, n, R)
        log.debug("h(%d): stage %d, %d candidates -> %d", n, m, len(cand), len(pref))
    if totally_real:
        pref = _totally_real(pref, M)
    return pref


@lru_cache(maxsize=64)
def count_hn(spec: HnSpec, totally_real: bool = False) -> int:
    """``h(n)``: number of monic integer polynomials of degree n with all roots in the closed disk."""
    if spec.n == 1:
        # Closed form 2 floor(R) + 1, with floor(R) = isqrt(M).
        return 2 * math.isqrt(spec.M) + 1
    return len(enumerate_hn(spec, totally_real))


@dataclass(frozen=True)
class FactorProbability:
    direct: float
    chained: float


def factor_probability(n: int, d: int, p: int, k: int = 1, totally_real: bool = False) -> FactorProbability:
    """Heuristic chance that a random polynomial counted by h(n) has a degree-d factor.

    ``direct = h(d) h(n-d) / h(n)`` and ``chained = (h(n-1)/h(n))^d``.
    """
    if not 1 <= d < n <= MAX_DEGREE:
        raise ValueError("need 1 <= d < n <= 6")

    def h(m: int) -> int:
        return count_hn(HnSpec(m, p, k), totally_real)

    hn = h(n)
    if hn == 0:
        raise ComputeError("h(n) = 0")
    return FactorProbability(h(d) * h(n - d) / hn, (h(n - 1) / hn) ** d)


@dataclass(frozen=True)
class ExponentPrediction:
    exponent: float
    finite: bool


def heuristic_exponent(alpha: float, d: int) -> ExponentPrediction:
    """Predicted growth exponent ``1 - alpha d`` of degree-d counts; negative means finitely many."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    e = 1 - alpha * d
    return ExponentPrediction(e, e < 0)


def conjectured_exponent(d: int) -> ExponentPrediction:
    """The specialization alpha = 1/6."""
    from fractions import Fraction

    e = 1 - Fraction(d, 6)
    return ExponentPrediction(float(e), e < 0)
