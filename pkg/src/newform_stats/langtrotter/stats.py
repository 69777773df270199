"""Value statistics of Hecke eigenvalues: pi_{f,a}, pi_{f,M}, C_f(X;k), collisions, congruences."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import sympy

from .. import ComputeError
from ..arith.numfield import NumberField, Subspace
from ..arith.poisson import poisson_pmf
from ..arith.primes import prime_table
from ..dataset.coefficients import CoefficientTable
from ..dataset.records import NewformRecord, Subfield

X_FLOOR = 8196


class IncompleteDataError(ComputeError):
    """Coefficients needed for a computation are not stored."""


@dataclass(frozen=True)
class FourierValue:
    """An element of K_f as exact power-basis coordinates."""

    coords: tuple[int, ...]

    @classmethod
    def of(cls, v: Sequence[int] | int, degree: int | None = None) -> "FourierValue":
        if isinstance(v, (int, np.integer)):
            return cls((int(v),) + (0,) * ((degree or 1) - 1))
        return cls(tuple(int(c) for c in v))


def x_f(level: int) -> float:
    """``max(8196, 30 sqrt(N), (N + 1) / 6)``: the prime bound for stored coefficients."""
    if level < 2:
        raise ValueError("level must be >= 2")
    return max(float(X_FLOOR), 30.0 * math.sqrt(level), (level + 1) / 6.0)


def _check_coverage(table: CoefficientTable, X: float) -> None:
    """Raise unless every prime ``p < X`` has a stored coefficient."""
    if X <= 2:
        return
    top = math.ceil(X) - 1
    ps = prime_table(max(top, 2)).between(1, X)
    missing = [int(p) for p in ps if int(p) not in table.rows]
    if missing:
        raise IncompleteDataError(
            f"form {table.owner}: {len(missing)} prime coefficient(s) below X={X:g} missing, first at p={missing[0]}"
        )


def _prime_rows(table: CoefficientTable, X: float) -> list[tuple[int, tuple[int, ...]]]:
    _check_coverage(table, X)
    return [(p, v) for p, v in table.prime_values(below=X)]


def value_counts(table: CoefficientTable, X: float) -> Counter:
    """``a -> pi_{f,a}(X)`` over prime-indexed coefficients with ``p < X``."""
    return Counter(FourierValue(v) for _, v in _prime_rows(table, X))


def pi_f_a(table: CoefficientTable, a: FourierValue | Sequence[int] | int, X: float) -> int:
    """``#{p < X prime : a_f(p) = a}``."""
    if not isinstance(a, FourierValue):
        a = FourierValue.of(a, table.degree)
    return sum(1 for _, v in _prime_rows(table, X) if v == a.coords)


def max_pi(table: CoefficientTable, X: float) -> int:
    counts = value_counts(table, X)
    return max(counts.values(), default=0)


def c_f_histogram(table: CoefficientTable, X: float) -> dict[int, int]:
    """``k -> C_f(X; k) = #{a : pi_{f,a}(X) = k}`` for ``k >= 1``."""
    hist = Counter(value_counts(table, X).values())
    return dict(sorted(hist.items()))


@dataclass(frozen=True)
class MaxPiTable:
    """``degree -> {k: number of forms with max_a pi_{f,a}(X_f) = k}``."""

    counts: dict[int, dict[int, int]]
    skipped: tuple[tuple[int, int], ...]  # forms without usable coefficients


def max_pi_table(catalog, degrees: Iterable[int] = (2, 3, 4, 5, 6), lower: float = 10**4,
                 upper: float = 2 * 10**6) -> MaxPiTable:
    out: dict[int, Counter] = defaultdict(Counter)
    skipped = []
    for d in degrees:
        for rec in catalog.query(degree=d, below=upper, above=lower):
            table = catalog.coefficient_table(rec)
            if table is None:
                skipped.append(rec.key)
                continue
            try:
                out[d][max_pi(table, x_f(rec.level))] += 1
            except IncompleteDataError:
                skipped.append(rec.key)
    return MaxPiTable({d: dict(sorted(c.items())) for d, c in sorted(out.items())}, tuple(skipped))


# ---- subfield membership ---------------------------------------------------------


class UnknownSubfieldError(ValueError):
    """The requested subfield is not registered for the record."""


def _subspace_for(rec: NewformRecord, M) -> Subspace | None:
    """Subspace of K_f spanned by the image of M; ``None`` means M = K_f."""
    poly = tuple(M.poly) if isinstance(M, Subfield) else tuple(M)
    if rec.field_poly is not None and poly == tuple(rec.field_poly):
        return None
    n = rec.degree
    if len(poly) == 2:  # Q embeds as the span of 1
        return Subspace.from_rows([(1,) + (0,) * (n - 1)], n)
    for sf in rec.subfields:
        if tuple(sf.poly) == poly:
            return Subspace.from_rows(sf.rows(), n)
    raise UnknownSubfieldError(f"subfield {poly} is not registered for form {rec.key}")


@dataclass(frozen=True)
class SubfieldHits:
    count: int
    primes: tuple[int, ...]


def pi_f_m(rec: NewformRecord, table: CoefficientTable, M, X: float) -> SubfieldHits:
    """Primes ``p < X`` with ``a_f(p)`` in the subfield ``M`` (a Subfield, its polynomial, or Q)."""
    space = _subspace_for(rec, M)
    rows = _prime_rows(table, X)
    hits = tuple(p for p, v in rows if space is None or space.contains(v))
    return SubfieldHits(len(hits), hits)


def subfield_indices(rec: NewformRecord, table: CoefficientTable, X: float) -> dict[tuple[int, ...], list[int]]:
    """All ``2 <= n <= X`` (prime or not) with ``a_f(n)`` in a proper subfield, keyed by subfield polynomial.

    Values lying in Q are reported under the key ``(0, 1)`` only.
    """
    n_deg = rec.degree
    spaces = [((0, 1), Subspace.from_rows([(1,) + (0,) * (n_deg - 1)], n_deg))]
    for sf in sorted(rec.subfields, key=lambda s: s.degree):
        if sf.degree > 1:
            spaces.append((tuple(sf.poly), Subspace.from_rows(sf.rows(), n_deg)))
    out: dict[tuple[int, ...], list[int]] = {k: [] for k, _ in spaces}
    for n in sorted(table.rows):
        if n < 2 or n > X:
            continue
        v = table.rows[n]
        for key, space in spaces:
            if space.contains(v):
                out[key].append(n)
                break
    return out


def rational_ratio(table: CoefficientTable, X: float) -> float:
    """``pi_{f,Q}(X) / sqrt(pi(X))``."""
    rows = _prime_rows(table, X)
    if not rows:
        return 0.0
    rational = sum(1 for _, v in rows if all(c == 0 for c in v[1:]))
    return rational / math.sqrt(len(rows))


# ---- coefficient collisions ----------------------------------------------------------


@dataclass(frozen=True)
class CollisionPair:
    n: int
    m: int
    value: tuple[int, ...]
    norm: int | Fraction


@dataclass(frozen=True)
class CollisionReport:
    pairs: tuple[CollisionPair, ...]
    # With filtering, the values 0 and 1 are listed once as classes of indices.
    trivial_classes: dict[tuple[int, ...], tuple[int, ...]] = field(default_factory=dict)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _implied(n: int, m: int, rows: dict[int, tuple]) -> bool:
    """``a(n) = a(m)`` follows from ``a(n/r) = a(m/r)`` for some ``r > 1`` coprime to ``(n/r)(m/r)``."""
    g = math.gcd(n, m)
    if g == 1:
        return False
    for r in sympy.divisors(g)[1:]:
        n0, m0 = n // r, m // r
        if math.gcd(r, n0 * m0) == 1 and n0 in rows and m0 in rows and rows[n0] == rows[m0]:
            return True
    return False


def collision_report(rec: NewformRecord, table: CoefficientTable, X: float, filter_trivial: bool = True) -> CollisionReport:
    """Equalities ``a_f(n) = a_f(m)`` with ``2 <= n < m <= X``.

    Unfiltered, every equal pair is listed.  Filtered, (i) equalities that
    follow from a smaller one by multiplying both indices by a coprime ``r``
    are dropped, chaining what remains within each value class, and (ii) the
    values 0 and 1 are summarized as index classes instead of pairs.
    """
    K = NumberField(tuple(rec.field_poly))
    rows = {n: v for n, v in table.rows.items() if 1 <= n <= X}
    groups: dict[tuple, list[int]] = defaultdict(list)
    for n in sorted(rows):
        if n >= 2:
            groups[rows[n]].append(n)
    zero = K.from_int(0)
    one = K.one()
    pairs: list[CollisionPair] = []
    trivial: dict[tuple, tuple[int, ...]] = {}
    for value in sorted(groups, key=lambda v: groups[v][0]):
        members = groups[value]
        if len(members) < 2 and not (filter_trivial and value in (zero, one)):
            continue
        if filter_trivial and value in (zero, one):
            trivial[value] = tuple(members)
            continue
        norm = K.norm(value)
        if not filter_trivial:
            for i, n in enumerate(members):
                for m in members[i + 1:]:
                    pairs.append(CollisionPair(n, m, value, norm))
            continue
        uf = _UnionFind(members)
        for i, n in enumerate(members):
            for m in members[i + 1:]:
                if _implied(n, m, rows):
                    uf.union(n, m)
        reps = sorted({uf.find(n) for n in members})
        for n, m in zip(reps, reps[1:]):
            pairs.append(CollisionPair(n, m, value, norm))
    pairs.sort(key=lambda c: (c.n, c.m))
    return CollisionReport(tuple(pairs), trivial)


# ---- congruences -------------------------------------------------------------------


def _primes_upto(n: int) -> list[int]:
    return [int(p) for p in prime_table(max(n, 2)).primes if p <= n] if n >= 2 else []


def eisenstein_gcd(rec: NewformRecord, table: CoefficientTable, X: float | None = None) -> int:
    """``gcd over p != N of Norm(p + 1 - a_f(p))``.

    For quadratic fields the norm equals ``(p+1)^2 - (p+1) Tr(a_p) + N(a_p)``.
    """
    K = NumberField(tuple(rec.field_poly))
    g = 0
    for p, v in table.prime_values(below=X):
        if p == rec.level:
            continue
        g = math.gcd(g, int(K.norm(K.sub(K.from_int(p + 1), v))))
        if g == 1:
            break
    return g


def eisenstein_scan(rec: NewformRecord, table: CoefficientTable, ell_max: int = 50, X: float | None = None) -> list[int]:
    """Primes ``ell <= ell_max`` dividing ``Norm(p + 1 - a_f(p))`` for every stored prime ``p != N``."""
    g = eisenstein_gcd(rec, table, X)
    return [ell for ell in _primes_upto(ell_max) if g % ell == 0]


@lru_cache(maxsize=64)
def integral_basis(poly: tuple[int, ...]) -> tuple[tuple[Fraction, ...], ...]:
    """Power-basis coordinates of a Z-basis of the ring of integers of ``Q[x]/(poly)``."""
    from sympy.polys.numberfields.basis import round_two

    x = sympy.Symbol("x")
    zk, _ = round_two(sympy.Poly(list(reversed(poly)), x))
    mat = zk.matrix.to_Matrix()
    den = int(zk.denom)
    n = len(poly) - 1
    return tuple(tuple(Fraction(int(mat[i, j]), den) for i in range(n)) for j in range(n))


@lru_cache(maxsize=64)
def _to_integral_coords(poly: tuple[int, ...]):
    basis = integral_basis(poly)
    n = len(basis)
    mat = sympy.Matrix([[sympy.Rational(basis[j][i].numerator, basis[j][i].denominator) for j in range(n)] for i in range(n)])
    return mat.inv()


def residue_mod(rec: NewformRecord, v: Sequence[int], q: int) -> tuple[int, ...]:
    """Class of the algebraic integer ``v`` in ``O_K / q O_K`` as integral-basis coordinates mod q."""
    inv = _to_integral_coords(tuple(rec.field_poly))
    n = len(v)
    out = []
    for i in range(n):
        c = sum(inv[i, j] * v[j] for j in range(n))
        if not c.is_integer:
            raise ComputeError(f"coefficient {tuple(v)} is not an algebraic integer")
        out.append(int(c) % q)
    return tuple(out)


@dataclass(frozen=True)
class Mod2Pattern:
    residues: dict[tuple[int, ...], int]  # residue class -> number of primes
    ones_at: tuple[int, ...]  # primes p != N with a_p = 1 mod 2
    flagged: bool  # a_p = 1 mod 2 exactly when p = 2


def mod2_pattern(rec: NewformRecord, table: CoefficientTable, X: float | None = None) -> Mod2Pattern:
    """Residues of ``a_f(p)`` in ``O_K/(2)`` over stored primes ``p != N``."""
    one = residue_mod(rec, (1,) + (0,) * (rec.degree - 1), 2)
    residues: Counter = Counter()
    ones = []
    for p, v in table.prime_values(below=X):
        if p == rec.level:
            continue
        r = residue_mod(rec, v, 2)
        residues[r] += 1
        if r == one:
            ones.append(p)
    flagged = ones == [2]
    return Mod2Pattern(dict(sorted(residues.items())), tuple(ones), flagged)


# ---- reference curves --------------------------------------------------------------


def murty_reference(kind: str, field_degree: int, X: float, subfield_degree: int | None = None) -> float:
    """Conjectured growth shape of ``pi_{f,a}(X)`` (kind "a") or ``pi_{f,M}(X)`` (kind "M")."""
    if X <= math.e:
        raise ValueError("X must exceed e")
    L = math.log(X)
    if kind == "a":
        if field_degree < 1:
            raise ValueError("field degree must be positive")
        if field_degree == 1:
            return math.sqrt(X) / L
        if field_degree == 2:
            return math.log(L)
        return 1.0
    if kind == "M":
        m = subfield_degree
        if m is None or m < 1 or field_degree % m:
            raise ValueError("subfield degree must divide the field degree")
        if m == field_degree:
            return X / L
        if field_degree == 2 and m == 1:
            return math.sqrt(X) / L
        if (field_degree == 3 and m == 1) or (field_degree == 4 and m == 2):
            return math.log(L)
        return 1.0
    raise ValueError(f"unknown case {kind!r}; expected 'a' or 'M'")


@dataclass(frozen=True)
class PoissonHistogram:
    mean: float
    observed: tuple[int, ...]  # observed[j] = number of forms with value j
    expected: tuple[float, ...]


def poisson_histogram(values: Sequence[int], extra: int = 1) -> PoissonHistogram:
    """Histogram of nonnegative integer values against the best-fit Poisson law (mean = MLE)."""
    vals = np.asarray(values, dtype=np.int64)
    if vals.size == 0:
        raise ValueError("no values")
    mean = float(vals.mean())
    top = int(vals.max()) + extra
    observed = np.bincount(vals, minlength=top + 1)
    js = np.arange(top + 1)
    expected = len(vals) * (poisson_pmf(mean, js) if mean > 0 else (js == 0).astype(float))
    return PoissonHistogram(mean, tuple(int(o) for o in observed), tuple(float(e) for e in expected))
