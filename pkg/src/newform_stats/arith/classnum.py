"""Class numbers of imaginary quadratic orders via reduced binary quadratic forms.

``h(D)`` counts primitive, positive-definite, reduced forms ``(a, b, c)`` with
``b^2 - 4ac = D``, ``|b| <= a <= c`` and ``b >= 0`` whenever ``|b| = a`` or
``a = c``.
"""

from __future__ import annotations

import logging
import math
import os
import threading
from pathlib import Path

import numba
import numpy as np

log = logging.getLogger(__name__)

CACHE_ENV = "NEWFORM_STATS_CACHE"

_lock = threading.Lock()
_tables: dict[int, np.ndarray] = {}


def _check_disc(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant (need D < 0, D = 0,1 mod 4)")


def class_number(D: int) -> int:
    """Class number of discriminant ``D`` by direct reduced-form enumeration."""
    D = int(D)
    _check_disc(D)
    n = -D
    count = 0
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b + n
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                count += 1
        a += 1
    return count


@numba.njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@numba.njit(cache=True)
def _reduced_form_counts(limit):
    h = np.zeros(limit + 1, np.int32)
    amax = int(math.sqrt(limit / 3.0)) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            n = 4 * a * a - b * b
            if n > limit:
                continue
            g = _gcd(a, abs(b))
            c = a
            while n <= limit:
                if not (c == a and b < 0):
                    if g == 1 or _gcd(g, c) == 1:
                        h[n] += 1
                c += 1
                n += 4 * a
    return h


def _cache_path(limit: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if root is None:
        root = os.path.join(os.path.expanduser("~"), ".cache", "newform_stats")
    try:
        Path(root).mkdir(parents=True, exist_ok=True)
    except OSError:
        return None
    return Path(root) / f"classnumbers_{limit}.npy"


def class_number_table(limit: int, use_disk_cache: bool = True) -> np.ndarray:
    """Array ``h`` with ``h[n]`` = class number of discriminant ``-n`` for ``n <= limit``.

    Entries for ``n`` not congruent to 0 or 3 mod 4 are zero.  One pass over
    all reduced forms; results are memoized in-process and on disk.
    """
    if limit < 3:
        raise ValueError("limit must be >= 3")
    with _lock:
        for lim, tab in _tables.items():
            if lim >= limit:
                return tab[: limit + 1]
        path = _cache_path(limit) if use_disk_cache else None
        tab = None
        if path is not None and path.exists():
            try:
                tab = np.load(path)
                if len(tab) != limit + 1:
                    tab = None
            except (OSError, ValueError):
                tab = None
        if tab is None:
            log.info("enumerating reduced forms up to |D| = %d", limit)
            tab = _reduced_form_counts(limit)
            if path is not None:
                try:
                    np.save(path, tab)
                except OSError:
                    pass
        tab.setflags(write=False)
        _tables[limit] = tab
        return tab
