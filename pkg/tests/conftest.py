"""Shared fixtures: elliptic-curve coefficient tables from point counts and small catalogs."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from newform_stats.arith.numfield import NumberField
from newform_stats.arith.primes import prime_table
from newform_stats.dataset import (
    Catalog,
    CoefficientStore,
    CoefficientTable,
    NewformRecord,
    extend_multiplicatively,
    format_catalog,
    format_coefficients,
)

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA_ENV = "NEWFORM_STATS_DATA"

# Weierstrass coefficients (a1, a2, a3, a4, a6) of two prime-conductor curves.
CURVE_11A3 = (0, -1, 1, 0, 0)  # y^2 + y = x^3 - x^2
CURVE_37A = (0, 0, 1, -1, 0)  # y^2 + y = x^3 - x


def affine_points(curve, p: int) -> int:
    """Number of affine F_p solutions of the Weierstrass equation."""
    a1, a2, a3, a4, a6 = curve
    if p == 2:
        return sum(
            1
            for x in range(2)
            for y in range(2)
            if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0
        )
    x = np.arange(p, dtype=np.int64)
    # Completing the square: (2y + a1 x + a3)^2 = 4(x^3 + a2 x^2 + a4 x + a6) + (a1 x + a3)^2.
    f = (4 * ((x * x % p * x) + a2 * x * x + a4 * x + a6) + (a1 * x + a3) ** 2) % p
    is_square = np.zeros(p, dtype=bool)
    is_square[(x * x) % p] = True
    chi = np.where(f == 0, 0, np.where(is_square[f], 1, -1))
    return int(p + chi.sum())


def curve_ap(curve, level: int, max_n: int) -> dict[int, tuple[int]]:
    """``a_p = p - #affine points`` for primes up to max_n (valid at the bad prime as well)."""
    out = {}
    for p in prime_table(max(max_n, 2)).primes:
        p = int(p)
        if p > max_n:
            break
        out[p] = (p - affine_points(curve, p),)
    return out


def curve_table(curve, level: int, max_n: int) -> CoefficientTable:
    K = NumberField((0, 1))
    rows = extend_multiplicatively(K, level, curve_ap(curve, level, max_n), max_n)
    return CoefficientTable((level, 0), 1, rows)


@pytest.fixture(scope="session")
def table_11a3() -> CoefficientTable:
    return curve_table(CURVE_11A3, 11, 8196)


@pytest.fixture(scope="session")
def table_37a() -> CoefficientTable:
    return curve_table(CURVE_37A, 37, 8196)


@pytest.fixture(scope="session")
def rec_11a3() -> NewformRecord:
    return NewformRecord(11, 0, 1, 1, -1, (0, 1))


@pytest.fixture(scope="session")
def rec_37a() -> NewformRecord:
    return NewformRecord(37, 0, 1, 1, 1, (0, 1))


GOLDEN = (-1, -1, 1)  # x^2 - x - 1, discriminant 5


def synthetic_quadratic_table(level: int, max_n: int, seed: int = 0) -> CoefficientTable:
    """Multiplicative table over Z[phi] with random Weil-bounded a_p; not a modular form."""
    rng = np.random.default_rng(seed)
    K = NumberField(GOLDEN)
    phi = (1 + 5**0.5) / 2
    psi = 1 - phi
    ap = {}
    for p in prime_table(max(max_n, 2)).primes:
        p = int(p)
        if p > max_n:
            break
        bound = 2 * p**0.5
        while True:
            u, v = (int(t) for t in rng.integers(-int(bound) - 2, int(bound) + 3, size=2))
            if abs(u + v * phi) <= bound and abs(u + v * psi) <= bound:
                break
        ap[p] = (u, v)
    rows = extend_multiplicatively(K, level, ap, max_n)
    return CoefficientTable((level, 0), 2, rows)


def write_catalog_dir(root: Path, records, tables=()) -> Path:
    """Write forms.csv plus coefficients/{level}.{orbit}.txt; returns the forms path."""
    root.mkdir(parents=True, exist_ok=True)
    forms = root / "forms.csv"
    forms.write_text(format_catalog(sorted(records, key=lambda r: r.key)))
    cdir = root / "coefficients"
    cdir.mkdir(exist_ok=True)
    for t in tables:
        (cdir / f"{t.owner[0]}.{t.owner[1]}.txt").write_text(format_coefficients(t))
    return forms


def synthetic_records(seed: int = 1, n1: int = 400, n2: int = 80) -> list[NewformRecord]:
    """Degree-1 and degree-2 (disc 5) records at random range primes, with random signs."""
    rng = np.random.default_rng(seed)
    ps = prime_table().between(10**4, 2 * 10**6)
    recs = {}
    for deg, n in ((1, n1), (2, n2)):
        for p in rng.choice(ps, size=n, replace=False):
            p = int(p)
            orbit = sum(1 for k in recs if k[0] == p)
            sign = int(rng.choice([1, -1]))
            if deg == 1:
                recs[(p, orbit)] = NewformRecord(p, orbit, 1, 1, sign, (0, 1))
            else:
                recs[(p, orbit)] = NewformRecord(p, orbit, 2, 5, sign, GOLDEN)
    return list(recs.values())


@pytest.fixture(scope="session")
def synthetic_catalog() -> Catalog:
    return Catalog(tuple(synthetic_records()), CoefficientStore(None), "synthetic")


@pytest.fixture(scope="session")
def dataset_dir() -> Path | None:
    return find_dataset_dir()


def find_dataset_dir() -> Path | None:
    d = os.environ.get(DATA_ENV)
    if d and (Path(d) / "forms.csv").is_file():
        return Path(d)
    return None
