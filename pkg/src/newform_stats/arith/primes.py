"""Prime sieving and deterministic primality testing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Levels studied throughout the package: primes strictly between these bounds.
RANGE_LO = 10**4
RANGE_HI = 2 * 10**6

_SEGMENT = 1 << 18


@dataclass(frozen=True)
class PrimeTable:
    """All primes ``<= limit`` in increasing order."""

    limit: int
    primes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)

    def pi(self, x: float) -> int:
        """Number of primes ``p <= x`` (requires ``x <= limit``)."""
        if x > self.limit:
            raise ValueError(f"x={x} exceeds table limit {self.limit}")
        return int(np.searchsorted(self.primes, math.floor(x), side="right"))

    def between(self, lo: float, hi: float) -> np.ndarray:
        """Primes in the open interval ``(lo, hi)``."""
        if hi - 1 > self.limit:
            raise ValueError(f"hi={hi} exceeds table limit {self.limit}")
        i = np.searchsorted(self.primes, lo, side="right")
        j = np.searchsorted(self.primes, hi, side="left")
        return self.primes[i:j]


def _base_primes(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.flatnonzero(flags)


def sieve(limit: int) -> PrimeTable:
    """Segmented sieve of Eratosthenes up to and including ``limit``."""
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    base = _base_primes(math.isqrt(limit))
    chunks = []
    for lo in range(0, limit + 1, _SEGMENT):
        hi = min(lo + _SEGMENT, limit + 1)
        flags = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            flags[: min(2, hi)] = False
        for q in base:
            q = int(q)
            if q * q >= hi:
                break
            start = max(q * q, (lo + q - 1) // q * q)
            flags[start - lo :: q] = False
        chunks.append(np.flatnonzero(flags) + lo)
    return PrimeTable(limit, np.concatenate(chunks).astype(np.int64))


@lru_cache(maxsize=4)
def prime_table(limit: int = RANGE_HI) -> PrimeTable:
    """Shared, cached :class:`PrimeTable`."""
    return sieve(limit)


def range_primes() -> np.ndarray:
    """Primes ``10^4 < p < 2*10^6`` (147704 of them)."""
    return prime_table(RANGE_HI).between(RANGE_LO, RANGE_HI)


# Deterministic for n < 3.3e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for ``|n| < 3.3e24``; exact trial division below 10^6."""
    n = abs(int(n))
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n < 41 * 41:
        return True
    if n >= 3_317_044_064_679_887_385_961_981:
        raise ValueError("is_prime is only deterministic below 3.3e24")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
