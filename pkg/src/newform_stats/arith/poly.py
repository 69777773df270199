"""Exact polynomial arithmetic.

Univariate polynomials are plain lists of integers (or Fractions) with
``coeffs[i]`` the coefficient of ``x**i``.  :class:`BigPoly` covers the
multivariate case (up to four variables) needed for invariant formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import sympy

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class BigPoly:
    """Sparse multivariate polynomial with arbitrary-precision integer coefficients."""

    nvars: int
    terms: Mapping[Exponent, int] = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.nvars <= 4:
            raise ValueError("BigPoly supports 1 to 4 variables")
        clean = {}
        for exp, c in self.terms.items():
            if len(exp) != self.nvars:
                raise ValueError(f"exponent {exp} has wrong length")
            if c:
                clean[tuple(int(e) for e in exp)] = int(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_sympy(cls, expr, gens: Sequence[sympy.Symbol]) -> "BigPoly":
        poly = sympy.Poly(sympy.expand(expr), *gens)
        terms = {}
        for exp, c in poly.terms():
            if not c.is_integer:
                raise ValueError(f"non-integer coefficient {c}")
            terms[exp] = int(c)
        return cls(len(gens), terms)

    def to_sympy(self, gens: Sequence[sympy.Symbol]):
        return sympy.Add(*[c * sympy.Mul(*[g**e for g, e in zip(gens, exp)]) for exp, c in self.terms.items()])

    def __call__(self, *point):
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} arguments")
        total = 0
        for exp, c in self.terms.items():
            term = c
            for x, e in zip(point, exp):
                if e:
                    term *= x**e
            total += term
        return total

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
        return g

    def __add__(self, other: "BigPoly") -> "BigPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return BigPoly(self.nvars, out)

    def __neg__(self) -> "BigPoly":
        return BigPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "BigPoly") -> "BigPoly":
        return self + (-other)

    def __mul__(self, other) -> "BigPoly":
        if isinstance(other, int):
            return BigPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return BigPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BigPoly":
        result = BigPoly(self.nvars, {(0,) * self.nvars: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


# ---- univariate helpers -------------------------------------------------------


def trim(p: Sequence) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> list:
    return [i * p[i] for i in range(1, len(p))]


def poly_mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def divmod_poly(p: Sequence, q: Sequence) -> tuple[list, list]:
    """Division over the rationals; returns (quotient, remainder) as Fraction lists."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    r = [Fraction(c) for c in trim(p)]
    dq = len(q) - 1
    lead = Fraction(q[-1])
    quot = [Fraction(0)] * max(len(r) - dq, 0)
    while len(r) - 1 >= dq and r:
        shift = len(r) - 1 - dq
        f = r[-1] / lead
        quot[shift] = f
        for i, c in enumerate(q):
            r[shift + i] -= f * c
        r = trim(r)
    return quot, r


def poly_gcd(p: Sequence, q: Sequence) -> list:
    """Monic gcd over the rationals."""
    a, b = [Fraction(c) for c in trim(p)], [Fraction(c) for c in trim(q)]
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def to_integer_primitive(p: Sequence) -> list[int]:
    """Clear denominators and content; leading coefficient made positive."""
    p = trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def squarefree_part(p: Sequence) -> list[int]:
    """Integer primitive polynomial with the same roots as ``p``, all simple."""
    g = poly_gcd(p, derivative(p))
    if len(g) <= 1:
        return to_integer_primitive(p)
    q, _ = divmod_poly(p, g)
    return to_integer_primitive(q)


def discriminant(p: Sequence[int]) -> int:
    """Polynomial discriminant of an integer polynomial (sympy convention)."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(trim(p))), x)
    return int(sympy.discriminant(poly))


# ---- exact real-root counting -------------------------------------------------


def _sign_at_root_of(p: Sequence, M: int, s: int) -> int:
    """Exact sign of ``p(s*sqrt(M))`` for integer or rational coefficients."""
    A = 0
    B = 0
    Mk = 1
    for i, c in enumerate(p):
        if i % 2 == 0:
            A += c * Mk
        else:
            B += c * Mk
            Mk *= M
    if s < 0:
        B = -B
    # value = A + B*sqrt(M)
    sa = (A > 0) - (A < 0)
    sb = (B > 0) - (B < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs = A * A
    rhs = B * B * M
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def _sturm_chain(p: Sequence) -> list[list]:
    chain = [[Fraction(c) for c in trim(p)], [Fraction(c) for c in derivative(trim(p))]]
    while trim(chain[-1]):
        _, r = divmod_poly(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _variations(signs: Iterable[int]) -> int:
    out = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            out += 1
        prev = s
    return out


def _divide_out(p: list, f: list) -> tuple[list, int]:
    m = 0
    while True:
        q, r = divmod_poly(p, f)
        if r or len(p) < len(f):
            return p, m
        p = q
        m += 1


def count_roots_in_sqrt_interval(p: Sequence, M: int) -> int:
    """Number of real roots of ``p`` in ``[-sqrt(M), sqrt(M)]``, with multiplicity.

    Exact for integer ``M >= 0`` and rational coefficients.
    """
    p = [Fraction(c) for c in trim(p)]
    if not p:
        raise ValueError("zero polynomial")
    count = 0
    r = math.isqrt(M)
    if r * r == M:
        for root in (r, -r) if r else (0,):
            p, m = _divide_out(p, [Fraction(-root), Fraction(1)])
            count += m
    else:
        p, m = _divide_out(p, [Fraction(-M), Fraction(0), Fraction(1)])
        count += 2 * m
    # Now neither endpoint is a root; peel multiplicities through gcd(p, p').
    while len(p) > 1:
        chain = _sturm_chain(p)
        lo = _variations(_sign_at_root_of(c, M, -1) for c in chain)
        hi = _variations(_sign_at_root_of(c, M, +1) for c in chain)
        count += lo - hi
        g = poly_gcd(p, derivative(p))
        if len(g) <= 1:
            break
        p = g
    return count


def count_real_roots(p: Sequence) -> int:
    """Number of distinct real roots of ``p``."""
    chain = _sturm_chain(p)

    def sign_inf(c, s):
        d = len(c) - 1
        lead = c[-1]
        v = (lead > 0) - (lead < 0)
        return v if (s > 0 or d % 2 == 0) else -v

    return _variations(sign_inf(c, -1) for c in chain) - _variations(sign_inf(c, 1) for c in chain)


def roots_on_circle(p: Sequence[int], M: int) -> int:
    """Number of distinct complex roots of integer ``p`` with ``|z|^2 = M``, exactly.

    A root z lies on the circle iff ``t = z + M/z`` is real with ``t^2 <= 4M``.
    The ``t`` values are the roots of ``Res_z(p(z), z^2 - t z + M)``.
    """
    z, t = sympy.symbols("z t")
    sf = squarefree_part(p)
    pz = sympy.Poly(list(reversed(sf)), z)
    res = sympy.Poly(sympy.resultant(pz.as_expr(), z**2 - t * z + M, z), t)
    coeffs = [int(c) for c in reversed(res.all_coeffs())]
    if not trim(coeffs):
        raise ArithmeticError("degenerate resultant")
    # Distinct z on the circle map to t values; conjugate pairs share t, and each
    # t root of the resultant corresponds to exactly the pair {z, M/z}.
    inside = count_roots_in_sqrt_interval(squarefree_part(coeffs), 4 * M)
    # Each t in the open interval is a conjugate pair {z, M/z}; t = +-2 sqrt(M)
    # is the single real root z = +-sqrt(M).
    r = math.isqrt(M)
    if r * r == M:
        endpoint = sum(1 for s in {r, -r} if evaluate(sf, s) == 0)
    else:
        endpoint = 2 if not divmod_poly(sf, [-M, 0, 1])[1] and len(sf) > 2 else 0
    return 2 * (inside - endpoint) + endpoint
