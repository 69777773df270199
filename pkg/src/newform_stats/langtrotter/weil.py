"""Algebraic integers of a totally real field inside the Weil box ``|sigma(a)| <= 2 sqrt(p)``."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import ConfigurationError
from ..arith.numfield import NumberField
from ..arith.poly import count_real_roots, count_roots_in_sqrt_interval, squarefree_part

MAX_DEGREE = 6


@dataclass(frozen=True)
class WeilBoxCount:
    total: int  # individual algebraic integers
    by_generated_degree: dict[int, int]  # degree of Q(a) -> count
    orbits: int  # Galois orbits, i.e. distinct minimal polynomials
    orbits_by_degree: dict[int, int]
    elements: tuple[tuple[Fraction, ...], ...]  # power-basis coordinates


def _fincke_pohst(gram: np.ndarray, bound: float) -> list[tuple[int, ...]]:
    """Integer vectors ``c`` with ``c^T G c <= bound`` (G positive definite), with float slack."""
    n = gram.shape[0]
    # q_ii and q_ij of the completed-square form sum_i q_ii (c_i + sum_{j>i} q_ij c_j)^2.
    q = np.array(gram, dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k, l] -= q[k, i] * q[i, l]
    out = []
    c = [0] * n
    slack = bound * (1 + 1e-9) + 1e-9

    def rec(i: int, remaining: float):
        centre = -sum(q[i, j] * c[j] for j in range(i + 1, n))
        r = math.sqrt(max(remaining, 0.0) / q[i, i]) + 1e-9
        for v in range(math.ceil(centre - r), math.floor(centre + r) + 1):
            c[i] = v
            rest = remaining - q[i, i] * (v - centre) ** 2
            if rest < -1e-9 * (1 + bound):
                continue
            if i == 0:
                out.append(tuple(c))
            else:
                rec(i - 1, rest)
        c[i] = 0

    rec(n - 1, slack)
    return out


def weil_box_count(field_poly: Sequence[int], p: int, basis: Sequence[Sequence] | None) -> WeilBoxCount:
    """Count algebraic integers ``a`` of ``Q[x]/(field_poly)`` with every embedding in ``[-2 sqrt p, 2 sqrt p]``.

    Both the number of such integers and the number of Galois orbits of them
    are reported.

    ``basis`` is a Z-basis of the ring of integers given as power-basis
    coordinates (see :func:`integral_basis`).  Candidates come from a
    Fincke-Pohst enumeration of the trace form with bound ``4 p n`` (implied
    by the box); each candidate is then confirmed exactly by counting the
    roots of its characteristic polynomial in the interval.
    """
    if basis is None:
        raise ConfigurationError("an integral basis is required for the Weil box count")
    K = NumberField(tuple(int(c) for c in field_poly))
    n = K.degree
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds {MAX_DEGREE}")
    if count_real_roots(list(K.poly)) != n:
        raise ValueError("field is not totally real")
    basis = [tuple(Fraction(v) for v in b) for b in basis]
    if len(basis) != n or any(len(b) != n for b in basis):
        raise ValueError(f"basis must consist of {n} vectors of length {n}")
    M = 4 * int(p)
    # Exact trace form Tr(w_i w_j); integral because the w_i are algebraic integers.
    gram_exact = [[K.trace(K.mul(basis[i], basis[j])) for j in range(n)] for i in range(n)]
    gram = np.array([[float(v) for v in row] for row in gram_exact])
    elements = []
    degrees: Counter = Counter()
    minpolys: set[tuple[int, ...]] = set()
    for c in _fincke_pohst(gram, float(n * M)):
        if sum(gram_exact[i][j] * c[i] * c[j] for i in range(n) for j in range(n)) > n * M:
            continue
        a = tuple(sum((c[i] * basis[i][k] for i in range(n)), Fraction(0)) for k in range(n))
        cp = K.charpoly(a)
        if any(not (isinstance(v, int) or v.is_integer) for v in cp):
            continue
        cp = [int(v) for v in cp]
        if count_roots_in_sqrt_interval(cp, M) != n:
            continue
        elements.append(a)
        mp = tuple(squarefree_part(cp))
        degrees[len(mp) - 1] += 1
        minpolys.add(mp)
    elements.sort()
    orbit_degrees = Counter(len(mp) - 1 for mp in minpolys)
    return WeilBoxCount(len(elements), dict(sorted(degrees.items())), len(minpolys),
                        dict(sorted(orbit_degrees.items())), tuple(elements))
