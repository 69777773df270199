import itertools
import math

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from newform_stats import ComputeError
from newform_stats.heckepoly import (
    HnSpec,
    conjectured_exponent,
    count_hn,
    enumerate_hn,
    factor_probability,
    heuristic_exponent,
)

from reference_values import HECKE_P2

x = sympy.Symbol("x")


def _in_disk_exact(coeffs, M):
    """Exact check that every root z has |z|^2 <= M, via sympy root isolation."""
    poly = sympy.Poly([1, *coeffs], x)
    for r in sympy.Poly(poly, x).all_roots():
        v = sympy.nsimplify(r) if r.is_real else r
        mod2 = sympy.re(v) ** 2 + sympy.im(v) ** 2
        if sympy.N(mod2 - M, 60) > 1e-40:
            return False
    return True


def _brute_h2(M):
    n = 0
    for c1 in range(-math.isqrt(4 * M), math.isqrt(4 * M) + 1):
        for c2 in range(-M, M + 1):
            if _in_disk_exact([c1, c2], M):
                n += 1
    return n


@pytest.mark.parametrize("k", [1, 2])
def test_h_p2_reference(k):
    assert count_hn(HnSpec(k, 2)) == HECKE_P2[k]


def test_h2_against_exact_oracle():
    for p in (2, 3):
        spec = HnSpec(2, p)
        assert count_hn(spec) == _brute_h2(spec.M)


@given(st.sampled_from([2, 3, 5, 7, 11, 13]), st.integers(1, 3))
def test_h1_closed_form(p, k):
    spec = HnSpec(1, p, k)
    R = 2 * p ** (k - 0.5)
    assert count_hn(spec) == 2 * math.floor(R + 1e-12) + 1
    assert count_hn(spec) == len(enumerate_hn(spec))


def test_h3_against_numpy_roots():
    spec = HnSpec(3, 2)
    M = spec.M
    rows = {tuple(r) for r in enumerate_hn(spec).tolist()}
    b1, b2, b3 = (math.isqrt(math.comb(3, m) ** 2 * M**m) for m in (1, 2, 3))
    want = set()
    for c in itertools.product(range(-b1, b1 + 1), range(-b2, b2 + 1), range(-b3, b3 + 1)):
        worst = float(np.max(np.abs(np.roots([1, *c])) ** 2))
        if worst < M - 1e-6:
            want.add(c)
        elif worst <= M + 1e-6 and _in_disk_exact(list(c), M):
            want.add(c)
    assert rows == want


@pytest.mark.parametrize("n", [2, 3])
def test_totally_real_subset(n):
    spec = HnSpec(n, 2)
    tr = enumerate_hn(spec, totally_real=True)
    assert len(tr) <= count_hn(spec)
    for row in tr.tolist():
        assert len(sympy.Poly([1, *row], x).real_roots()) == n  # with multiplicity


def test_factor_probability():
    fp = factor_probability(3, 1, 2)
    h1, h2, h3 = (count_hn(HnSpec(m, 2)) for m in (1, 2, 3))
    assert fp.direct == pytest.approx(h1 * h2 / h3)
    assert fp.chained == pytest.approx(h2 / h3)
    with pytest.raises(ValueError):
        factor_probability(3, 3, 2)


def test_exponents():
    assert heuristic_exponent(0.25, 2).exponent == pytest.approx(0.5)
    assert conjectured_exponent(6).exponent == 0 and not conjectured_exponent(6).finite
    assert conjectured_exponent(7).finite
    with pytest.raises(ValueError):
        heuristic_exponent(1.5, 2)


def test_spec_validation():
    with pytest.raises(ValueError):
        HnSpec(2, 4)
    with pytest.raises(ValueError):
        HnSpec(0, 2)
    with pytest.raises(ComputeError):
        enumerate_hn(HnSpec(7, 2))
