"""Hecke eigenvalue tables ``n -> a_f(n)`` stored as power-basis coordinate vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import sympy

from .. import ParseError, ValidationError
from ..arith.numfield import NumberField


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients ``a(n)`` for the orbit ``owner = (level, orbit)``; sparse in n."""

    owner: tuple[int, int]
    degree: int
    rows: dict[int, tuple[int, ...]]

    @property
    def max_n(self) -> int:
        return max(self.rows, default=0)

    def __getitem__(self, n: int) -> tuple[int, ...]:
        return self.rows[n]

    def __contains__(self, n: int) -> bool:
        return n in self.rows

    def primes(self, below: float | None = None) -> list[int]:
        """Stored prime indices (below ``below`` if given), ascending."""
        return [n for n in sorted(self.rows) if (below is None or n < below) and sympy.isprime(n)]

    def prime_values(self, below: float | None = None) -> Iterator[tuple[int, tuple[int, ...]]]:
        for p in self.primes(below):
            yield p, self.rows[p]


def parse_coefficients(path: str | Path, owner: tuple[int, int], degree: int) -> CoefficientTable:
    rows: dict[int, tuple[int, ...]] = {}
    last = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            try:
                vals = [int(t) for t in parts]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-integer entry") from exc
            n, vec = vals[0], tuple(vals[1:])
            if len(vec) != degree:
                raise ParseError(f"{path}:{lineno}: expected {degree} coordinates, got {len(vec)}")
            if n <= last:
                raise ParseError(f"{path}:{lineno}: indices must be strictly increasing")
            last = n
            rows[n] = vec
    return CoefficientTable(owner, degree, rows)


def format_coefficients(table: CoefficientTable) -> str:
    return "".join(f"{n} " + " ".join(str(v) for v in table.rows[n]) + "\n" for n in sorted(table.rows))


def _factor(n: int) -> dict[int, int]:
    return sympy.factorint(n)


def check_coefficients(
    table: CoefficientTable, field: NumberField, pairs: Iterable[tuple[int, int]] | None = None
) -> None:
    """Check normalization, multiplicativity and the Hecke recursion at prime powers.

    ``pairs`` restricts the multiplicativity test to the given (m, n); by default
    every coprime split of every stored index is tested.
    """
    level = table.owner[0]
    rows = table.rows
    if 1 in rows and tuple(rows[1]) != field.one():
        raise ValidationError(f"{table.owner}: a(1) is not 1")
    if pairs is None:
        pairs = _default_pairs(rows)
    for m, n in pairs:
        if math.gcd(m, n) != 1 or m not in rows or n not in rows or m * n not in rows:
            continue
        if field.mul(rows[m], rows[n]) != tuple(rows[m * n]):
            raise ValidationError(f"{table.owner}: a({m * n}) != a({m}) a({n})")
    for q in sorted(rows):
        fac = _factor(q)
        if len(fac) != 1:
            continue
        (p, r), = fac.items()
        if r < 2 or p not in rows or p ** (r - 1) not in rows or p ** (r - 2) not in rows:
            continue
        prev, prev2 = rows[p ** (r - 1)], rows[p ** (r - 2)]
        if p == level:
            expect = field.mul(rows[p], prev)
        else:
            expect = field.sub(field.mul(rows[p], prev), field.scale(prev2, p))
        if expect != tuple(rows[q]):
            raise ValidationError(f"{table.owner}: Hecke recursion fails at n={q}")


def _default_pairs(rows: dict[int, tuple[int, ...]]) -> Iterator[tuple[int, int]]:
    for n in rows:
        fac = _factor(n)
        if len(fac) < 2:
            continue
        items = list(fac.items())
        p, e = items[0]
        m = p**e
        yield m, n // m


def extend_multiplicatively(
    field: NumberField, level: int, prime_values: dict[int, tuple[int, ...]], max_n: int
) -> dict[int, tuple[int, ...]]:
    """All a(n), n <= max_n, from a(p) for primes p <= max_n."""
    a: dict[int, tuple[int, ...]] = {1: field.one()}
    for p in sorted(prime_values):
        if p > max_n:
            break
        ap = tuple(prime_values[p])
        prev2, prev = field.one(), ap
        pk = p
        a[p] = ap
        while pk * p <= max_n:
            pk *= p
            if p == level:
                nxt = field.mul(ap, prev)
            else:
                nxt = field.sub(field.mul(ap, prev), field.scale(prev2, p))
            a[pk] = nxt
            prev2, prev = prev, nxt
    for n in range(2, max_n + 1):
        if n in a:
            continue
        fac = _factor(n)
        if len(fac) < 2:
            continue  # prime power whose prime is missing
        val = field.one()
        ok = True
        for p, e in fac.items():
            if p**e not in a:
                ok = False
                break
            val = field.mul(val, a[p**e])
        if ok:
            a[n] = val
    return a
