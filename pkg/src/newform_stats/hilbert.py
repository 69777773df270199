"""Lattice-point counts on the five rational Hilbert modular surfaces.

A point ``(a, b, c)`` with ``gcd = 1`` stands for the affine point
``(a/c, b/c)`` of the surface; its discriminant invariant ``I10(a, b, c)`` is
given below for each discriminant ``D``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Literal, Sequence

import numba
import numpy as np
import sympy
import sympy.ntheory

from . import ComputeError, ConfigurationError
from .arith.poly import BigPoly

log = logging.getLogger(__name__)

_a, _b, _c = sympy.symbols("a b c")
GENS = (_a, _b, _c)

# (constant, [(factor, exponent), ...]) with I10 = constant * prod factor^exponent.
_I10_FACTORS: dict[int, tuple[int, list[tuple[str, int]]]] = {
    5: (8, [("a**5 - 10*a**3*b**2 + 25*a*b**4 + 5*a**4*c - 50*a**2*b**2*c + 125*b**4*c"
             " - 5*a**3*c**2 + 25*a*b**2*c**2 - 45*a**2*c**3 + 225*b**2*c**3 + 108*c**5", 2)]),
    8: (8, [("c", 3), ("a - c", 3), ("a + c", 6),
            ("-16*a**2*b**2 + 32*b**4 + a**3*c - 56*a*b**2*c + 9*a**2*c**2 - 72*b**2*c**2"
             " + 27*a*c**3 + 27*c**4", 2)]),
    12: (1, [("a + c", 3), ("a - c", 9), ("-27*a**2 + b**2 + 27*c**2", 2),
             ("a**2*b + 9*a**2*c - 8*c**3", 3)]),
    13: (2**3 * 3**11, [
        ("-267*a**3 + 72*a**2*b - a*b**2 - 3552*a**2*c + 1440*a*b*c - 128*b**2*c + 768*a*c**2", 2),
        ("-12*a**3 + 3*a**2*c + b**2*c", 4),
        ("-a**3 - 150*a**2*c + 6*a*b*c - 264*a*c**2 + 120*b*c**2 + 64*c**3", 4)]),
    17: (2**15 * 3**11, [
        ("-132*a + b + 3*c", 3),
        ("-256*a**3 - 1200*a**2*c + 18*a*b*c - 6006*a*c**2 + 99*b*c**2 + 41*c**3", 5),
        ("456*a**2 + a*b + 723*a*c - 8*b*c + 24*c**2", 3),
        ("4608*a**3 - 1728*a**2*c + b**2*c + 216*a*c**2 - 9*c**3", 2)]),
}

I10_DEGREE = {5: 10, 8: 20, 12: 25, 13: 30, 17: 30}

# Prop.-style lower-bound exponents for #Z_D(T).
R_D = {5: 3.0, 8: 1.5, 12: 2.0, 13: 1.0, 17: 1.0}

Strategy = Literal["i10-only-box", "full-invariants"]


@dataclass(frozen=True)
class SurfaceModel:
    """Invariant polynomials in ``(a, b, c)`` for one discriminant ``D``.

    ``factors`` holds the I10 factorization used for fast exclusion tests;
    ``i2``, ``i4``, ``i6`` are optional and only needed for the full-invariant
    enumeration.
    """

    D: int
    constant: int
    factors: tuple[tuple[BigPoly, int], ...]
    i10: BigPoly
    i2: BigPoly | None = None
    i4: BigPoly | None = None
    i6: BigPoly | None = None
    excluded: tuple[str, ...] = field(default=())

    def __post_init__(self):
        deg = I10_DEGREE[self.D]
        if not self.i10.is_homogeneous() or self.i10.total_degree() != deg:
            raise ValueError(f"D={self.D}: I10 is not homogeneous of degree {deg}")
        for j, poly in ((1, self.i2), (2, self.i4), (3, self.i6)):
            if poly is None:
                continue
            want = j * deg // 5
            if not poly.is_homogeneous() or poly.total_degree() != want:
                raise ValueError(f"D={self.D}: I{2 * j} must be homogeneous of degree {want}")

    @property
    def degree(self) -> int:
        return I10_DEGREE[self.D]

    @property
    def has_full_invariants(self) -> bool:
        return self.i2 is not None and self.i4 is not None and self.i6 is not None

    def with_invariants(self, i2: BigPoly, i4: BigPoly, i6: BigPoly) -> "SurfaceModel":
        return SurfaceModel(self.D, self.constant, self.factors, self.i10, i2, i4, i6, self.excluded)

    def eval_i10(self, a: int, b: int, c: int) -> int:
        out = self.constant
        for f, e in self.factors:
            out *= f(a, b, c) ** e
        return out

    def invariants(self, a: int, b: int, c: int) -> tuple[int, int, int, int]:
        if not self.has_full_invariants:
            raise ConfigurationError(f"D={self.D}: I2, I4, I6 not loaded")
        return (self.i2(a, b, c), self.i4(a, b, c), self.i6(a, b, c), self.eval_i10(a, b, c))

    def excluded_point(self, a: int, b: int, c: int) -> bool:
        """Membership in the excluded locus: c = 0 or any I10 factor vanishes."""
        return c == 0 or any(f(a, b, c) == 0 for f, _ in self.factors)


def _build(D: int) -> SurfaceModel:
    const, raw = _I10_FACTORS[D]
    factors = tuple((BigPoly.from_sympy(sympy.sympify(s), GENS), e) for s, e in raw)
    i10 = BigPoly(3, {(0, 0, 0): const})
    for f, e in factors:
        i10 = i10 * f**e
    excluded = ("c = 0",) + tuple(f"{s} = 0" for s, _ in raw)
    return SurfaceModel(D, const, factors, i10, excluded=excluded)


_MODELS: dict[int, SurfaceModel] = {}


def surface_model(D: int) -> SurfaceModel:
    if D not in _I10_FACTORS:
        raise ValueError(f"D must be one of {sorted(_I10_FACTORS)}")
    if D not in _MODELS:
        _MODELS[D] = _build(D)
    return _MODELS[D]


def eval_i10(D: int, a: int, b: int, c: int) -> int:
    """Exact value of I10(a, b, c) for the surface of discriminant D."""
    return surface_model(D).eval_i10(int(a), int(b), int(c))


def load_invariant_file(path: str | Path) -> BigPoly:
    """Read a polynomial in (a, b, c): one monomial per line, ``coef exp_a exp_b exp_c``."""
    terms: dict[tuple[int, int, int], int] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 'coef exp_a exp_b exp_c'")
        coef, *exps = (int(x) for x in parts)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coef
    return BigPoly(3, terms)


def load_surface(D: int, i2: str | Path, i4: str | Path, i6: str | Path) -> SurfaceModel:
    return surface_model(D).with_invariants(load_invariant_file(i2), load_invariant_file(i4), load_invariant_file(i6))


# ---- minimal scaling ----------------------------------------------------------


@dataclass(frozen=True)
class ScaledInvariants:
    raw: tuple[int, int, int, int]
    minimal: tuple[int, int, int, int]
    u: int


_SCALE_WEIGHTS = (1, 2, 3, 5)


def minimal_scale(raw: Sequence[int]) -> ScaledInvariants:
    """Divide ``(I2, I4, I6, I10)`` by ``(u, u^2, u^3, u^5)`` for the largest integer u > 0."""
    raw = tuple(int(x) for x in raw)
    if len(raw) != 4:
        raise ValueError("expected four invariants")
    if raw[3] == 0:
        raise ComputeError("I10 = 0: degenerate point")
    g = 0
    for v in raw:
        g = math.gcd(g, v)
    u = 1
    for prime in sympy.ntheory.factorint(g):
        e = min(_valuation(v, prime) // w for v, w in zip(raw, _SCALE_WEIGHTS) if v != 0)
        u *= prime**e
    minimal = tuple(v // u**w for v, w in zip(raw, _SCALE_WEIGHTS))
    return ScaledInvariants(raw, minimal, u)


def _valuation(n: int, prime: int) -> int:
    n = abs(n)
    k = 0
    while n % prime == 0:
        n //= prime
        k += 1
    return k


# ---- enumeration ----------------------------------------------------------------


def _factor_arrays(model: SurfaceModel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pack factor monomials as (factor_id, coef, ea, eb, ec) rows for the numba kernel."""
    rows = []
    for fid, (f, _) in enumerate(model.factors):
        for (ea, eb, ec), coef in f.terms.items():
            rows.append((fid, coef, ea, eb, ec))
    arr = np.array(rows, dtype=np.int64)
    return arr, np.int64(len(model.factors)), np.array([e for _, e in model.factors], dtype=np.int64)


@numba.njit(cache=True)
def _gcd3(a, b, c):
    a, b, c = abs(a), abs(b), abs(c)
    while b:
        a, b = b, a % b
    while c:
        a, c = c, a % c
    return a


@numba.njit(cache=True)
def _box_slice(a, bound, terms, nfactors):
    """All (b, c) in the box with gcd(a, b, c) = 1, c != 0 and every I10 factor nonzero."""
    out = np.empty((2 * bound + 1) * (2 * bound + 1), dtype=np.int64)
    n = 0
    vals = np.zeros(nfactors, dtype=np.int64)
    for b in range(-bound, bound + 1):
        for c in range(-bound, bound + 1):
            if c == 0 or _gcd3(a, b, c) != 1:
                continue
            vals[:] = 0
            for t in range(terms.shape[0]):
                v = terms[t, 1]
                for _ in range(terms[t, 2]):
                    v *= a
                for _ in range(terms[t, 3]):
                    v *= b
                for _ in range(terms[t, 4]):
                    v *= c
                vals[terms[t, 0]] += v
            ok = True
            for f in range(nfactors):
                if vals[f] == 0:
                    ok = False
                    break
            if ok:
                out[n] = b * (2 * bound + 1) + c + bound
                n += 1
    return out[:n]


def box_bound(D: int, T: float) -> int:
    """Per-variable box radius ``floor(T^(10/deg I10))`` used by the box strategy."""
    return int(math.floor(T ** (10 / I10_DEGREE[D]) * (1 + 1e-12)))


@dataclass
class ZDResult:
    D: int
    T: float
    strategy: str
    count: int


def _check_int64_safe(model: SurfaceModel, bound: int) -> None:
    for f, _ in model.factors:
        worst = sum(abs(c) * bound ** sum(e) for e, c in f.terms.items())
        if worst >= 2**62:
            raise ComputeError(f"box radius {bound} too large for exact int64 factor evaluation")


def iter_box_points(D: int, T: float) -> Iterator[tuple[int, int, int]]:
    """Stream coprime (a, b, c) in the box, with c != 0 and I10 != 0, ordered by a then b then c."""
    model = surface_model(D)
    bound = box_bound(D, T)
    _check_int64_safe(model, bound)
    terms, nf, _ = _factor_arrays(model)
    width = 2 * bound + 1
    for a in range(-bound, bound + 1):
        for code in _box_slice(a, bound, terms, nf):
            b, c = divmod(int(code), width)
            yield a, b - bound, c - bound


def _count_box(D: int, T: float) -> int:
    model = surface_model(D)
    bound = box_bound(D, T)
    _check_int64_safe(model, bound)
    terms, nf, _ = _factor_arrays(model)
    return sum(len(_box_slice(a, bound, terms, nf)) for a in range(-bound, bound + 1))


def iter_full_points(
    model: SurfaceModel, T: float, search_box: int, bound_on: Literal["minimal", "raw"] = "minimal"
) -> Iterator[tuple[tuple[int, int, int], ScaledInvariants]]:
    """Coprime points in ``[-search_box, search_box]^3`` outside the excluded locus with
    ``|I_2j| < T^(2j)`` for j = 1, 2, 3, 5, applied to minimal or raw invariants."""
    if not model.has_full_invariants:
        raise ConfigurationError(f"D={model.D}: full-invariant enumeration needs I2, I4, I6 files")
    limits = [T ** (2 * w) for w in _SCALE_WEIGHTS]
    r = int(search_box)
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            for c in range(-r, r + 1):
                if math.gcd(math.gcd(a, b), c) != 1 or model.excluded_point(a, b, c):
                    continue
                scaled = minimal_scale(model.invariants(a, b, c))
                vals = scaled.minimal if bound_on == "minimal" else scaled.raw
                if all(abs(v) < lim for v, lim in zip(vals, limits)):
                    yield (a, b, c), scaled


def enumerate_zd(
    D: int,
    T: float,
    strategy: Strategy = "i10-only-box",
    *,
    model: SurfaceModel | None = None,
    search_box: int | None = None,
    bound_on: Literal["minimal", "raw"] = "minimal",
) -> ZDResult:
    """Count points of Z_D(T) under the chosen strategy.

    ``i10-only-box`` counts coprime points with ``|a|, |b|, |c| <= T^(10/deg I10)``,
    ``c != 0`` and ``I10 != 0``.  ``full-invariants`` needs a model carrying
    I2, I4, I6 and a finite ``search_box`` radius.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if strategy == "i10-only-box":
        return ZDResult(D, T, strategy, _count_box(D, T))
    if strategy == "full-invariants":
        model = model or surface_model(D)
        if search_box is None:
            raise ConfigurationError("full-invariants strategy needs search_box")
        n = sum(1 for _ in iter_full_points(model, T, search_box, bound_on))
        return ZDResult(D, T, strategy, n)
    raise ValueError(f"unknown strategy {strategy!r}")


def special_curve_d12(T: float, c_max: int = 2) -> int:
    """Points (0, b, c) of the D = 12 surface with ``|I10| < T^10``, ``0 < |c| <= c_max``.

    On a = 0, I10 reduces to a quartic in b, so the count grows like T^(5/2).
    """
    model = surface_model(12)
    limit = T**10
    total = 0
    for c in range(-c_max, c_max + 1):
        if c == 0:
            continue
        b = 0
        while True:
            hits = [bb for bb in {b, -b} if math.gcd(bb, c) == 1]
            vals = [model.eval_i10(0, bb, c) for bb in hits]
            if b > 0 and all(abs(v) >= limit for v in (model.eval_i10(0, b, c), model.eval_i10(0, -b, c))):
                break
            total += sum(1 for v in vals if v != 0 and abs(v) < limit)
            b += 1
    return total


@dataclass(frozen=True)
class ExponentReport:
    D: int | None
    Ts: tuple[float, ...]
    counts: tuple[int, ...]
    slope: float
    reference: float | None


def fit_slope(Ts: Sequence[float], counts: Sequence[int]) -> float:
    """Least-squares slope of log(count) against log(T)."""
    if len(Ts) < 3 or len(Ts) != len(counts):
        raise ValueError("need at least three (T, count) pairs")
    if any(c <= 0 for c in counts):
        raise ComputeError("zero counts: insufficient data for a log-log fit")
    x = np.log(np.asarray(Ts, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    xc = x - x.mean()
    return float(xc @ (y - y.mean()) / (xc @ xc))


def exponent_report(D: int, Ts: Sequence[float], strategy: Strategy = "i10-only-box", **kw) -> ExponentReport:
    counts = tuple(enumerate_zd(D, T, strategy, **kw).count for T in Ts)
    return ExponentReport(D, tuple(Ts), counts, fit_slope(Ts, counts), R_D[D])
