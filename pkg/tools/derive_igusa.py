"""Derive the Igusa-Clebsch invariants I2, I4, I6 as polynomials in the
coefficients a0..a6 of a binary sextic, and write them to
src/newform_stats/genus2/_ic_tables.py.

The root formulas (with r1..r6 the roots and a6 the leading coefficient) are

    I2 = a6^2  * sum_15 (12)^2 (34)^2 (56)^2
    I4 = a6^4  * sum_10 (12)^2 (23)^2 (31)^2 (45)^2 (56)^2 (64)^2
    I6 = a6^6  * sum_60 (12)^2 (23)^2 (31)^2 (45)^2 (56)^2 (64)^2 (14)^2 (25)^2 (36)^2

where (ij) = r_i - r_j.  Each invariant is a polynomial of degree 2j in the
a_i and isobaric of weight 6j; we solve for its coefficients exactly from
random sextics with rational roots.  Run from the repository root:

    python3 tools/derive_igusa.py
"""

import itertools
import random
from fractions import Fraction
from pathlib import Path

import sympy as sp

OUT = Path(__file__).resolve().parents[1] / "src" / "newform_stats" / "genus2" / "_ic_tables.py"


def pair_partitions(s):
    if not s:
        yield []
        return
    a = s[0]
    for i in range(1, len(s)):
        rest = s[1:i] + s[i + 1 :]
        for p in pair_partitions(rest):
            yield [(a, s[i])] + p


def root_invariants(lead, r):
    def d(i, j):
        return (r[i] - r[j]) ** 2

    I2 = sum(d(*p[0]) * d(*p[1]) * d(*p[2]) for p in pair_partitions(list(range(6))))
    I4 = 0
    I6 = 0
    for T in itertools.combinations(range(6), 3):
        if 0 not in T:
            continue
        U = [i for i in range(6) if i not in T]
        i1, i2, i3 = T
        j1, j2, j3 = U
        inner = d(i1, i2) * d(i2, i3) * d(i1, i3) * d(j1, j2) * d(j2, j3) * d(j1, j3)
        I4 += inner
        for perm in itertools.permutations(U):
            I6 += inner * d(i1, perm[0]) * d(i2, perm[1]) * d(i3, perm[2])
    return lead**2 * I2, lead**4 * I4, lead**6 * I6


def monomials(deg, weight, nvar=7):
    out = []

    def rec(i, left, w, cur):
        if i == nvar:
            if left == 0 and w == weight:
                out.append(tuple(cur))
            return
        for e in range(left + 1):
            rec(i + 1, left - e, w + e * i, cur + [e])

    rec(0, deg, 0, [])
    return out


def main():
    x = sp.symbols("x")
    rng = random.Random(1)
    samples = []
    for _ in range(200):
        lead = rng.choice([1, -1, 2, 3, -2, 5])
        r = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(6)]
        poly = sp.Poly(lead * sp.prod([x - sp.Rational(q.numerator, q.denominator) for q in r]), x)
        co = [sp.Rational(c) for c in reversed(poly.all_coeffs())]
        samples.append((co, root_invariants(Fraction(lead), r)))

    tables = {}
    for idx, deg in [(0, 2), (1, 4), (2, 6)]:
        ms = monomials(deg, 3 * deg)
        A = sp.Matrix([[sp.prod([co[i] ** e for i, e in enumerate(m)]) for m in ms] for co, _ in samples])
        b = sp.Matrix([sp.Rational(inv[idx].numerator, inv[idx].denominator) for _, inv in samples])
        sol = (A.T * A).LUsolve(A.T * b)
        assert A * sol == b, "fit is not exact"
        assert all(c.is_integer for c in sol)
        tables[deg] = {m: int(c) for m, c in zip(ms, sol) if c != 0}

    lines = [
        '"""Generated by tools/derive_igusa.py; do not edit.',
        "",
        "Maps exponent tuples (e0, ..., e6) of a0^e0 ... a6^e6 to integer coefficients.",
        '"""',
        "",
    ]
    for name, deg in (("I2_TERMS", 2), ("I4_TERMS", 4), ("I6_TERMS", 6)):
        lines.append(f"{name} = {{")
        for m, c in sorted(tables[deg].items()):
            lines.append(f"    {m}: {c},")
        lines.append("}")
        lines.append("")
    OUT.write_text("\n".join(lines))
    print(f"wrote {OUT}: " + ", ".join(f"deg {d}: {len(t)} terms" for d, t in tables.items()))


if __name__ == "__main__":
    main()
