import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from newform_stats.arith.classnum import class_number, class_number_table
from newform_stats.arith.dims import dim_split, dim_splits, genus_x0
from newform_stats.arith.numfield import NumberField, Subspace
from newform_stats.arith.poisson import (
    log_factorial,
    poisson_logcdf,
    poisson_logpmf,
    poisson_logsf,
    poisson_pmf,
)
from newform_stats.arith.poly import count_real_roots, count_roots_in_sqrt_interval, discriminant, squarefree_part
from newform_stats.arith.primes import is_prime, prime_table, range_primes, sieve
from newform_stats.arith.special import li_of_exp, log_integral

from reference_values import DIM_SMALL, PI_2E6, RANGE_PRIME_COUNT


# ---- primes ----------------------------------------------------------------------


def test_prime_counts_against_sympy():
    t = prime_table()
    assert t.pi(2 * 10**6) == PI_2E6 == sympy.primepi(2 * 10**6)
    assert len(range_primes()) == RANGE_PRIME_COUNT


def test_small_sieve_matches_sympy():
    assert sieve(1000).primes.tolist() == list(sympy.primerange(2, 1001))


def test_between_is_open():
    t = prime_table(100)
    assert t.between(2, 13).tolist() == [3, 5, 7, 11]


@given(st.integers(min_value=-10, max_value=10**12))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


# ---- class numbers ------------------------------------------------------------------


def _reduced_forms(D):
    """Independent count of primitive reduced forms of discriminant D < 0."""
    n = 0
    for a in range(1, math.isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                n += 1
    return n


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -15, -20, -23, -47, -71, -163, -268, -1003, -4 * 9973])
def test_class_number_oracle(D):
    assert class_number(D) == _reduced_forms(D)


def test_class_number_table_agrees(tmp_path, monkeypatch):
    monkeypatch.setenv("NEWFORM_STATS_CACHE", str(tmp_path))
    h = class_number_table(2000, use_disk_cache=False)
    for D in range(3, 2001):
        if D % 4 in (0, 3):
            assert h[D] == _reduced_forms(-D)


@pytest.mark.parametrize("D", [0, 1, 2, 5, -1, -2, -5])
def test_class_number_rejects_non_discriminants(D):
    with pytest.raises(ValueError):
        class_number(D)


# ---- dimensions -------------------------------------------------------------------


@pytest.mark.parametrize("p,split", sorted(DIM_SMALL.items()) + [(23, (0, 2)), (43, (1, 2)), (53, (1, 3)), (67, (2, 3))])
def test_dim_split_small(p, split):
    s = dim_split(p)
    assert (s.dim_plus, s.dim_minus) == split
    assert s.total == genus_x0(p)


def test_dim_split_vectorized_matches_scalar():
    ps = prime_table(5000).between(4, 5000)
    plus, minus = dim_splits(ps)
    for i in range(0, len(ps), 37):
        s = dim_split(int(ps[i]))
        assert (plus[i], minus[i]) == (s.dim_plus, s.dim_minus)


@given(st.sampled_from(prime_table(200_000).between(4, 200_000).tolist()))
def test_dim_split_invariants(p):
    s = dim_split(p)
    assert s.dim_plus + s.dim_minus == genus_x0(p)
    assert s.dim_plus >= 0 and s.dim_minus >= 0
    # The minus space is never smaller than the plus space at prime level.
    assert s.dim_minus >= s.dim_plus


def test_dim_split_rejects_composite():
    with pytest.raises(ValueError):
        dim_split(15)


def test_approximate_dims_leading_terms():
    s = dim_split(10007, "approximate")
    assert s.dim_plus == pytest.approx(10007 / 24 - math.sqrt(10007) / 2)
    assert s.difference == pytest.approx(math.sqrt(10007))


# ---- li ------------------------------------------------------------------------------


@pytest.mark.parametrize("x", [1.5, 2.0, 10.0, 1e4, 2e6, 1e12, 1e30])
def test_li_against_mpmath(x):
    assert log_integral(x) == pytest.approx(float(mpmath.li(x)), rel=1e-12)


@given(st.floats(min_value=1e-6, max_value=600))
def test_li_of_exp_against_mpmath(u):
    want = float(mpmath.li(mpmath.e**u))
    assert li_of_exp(u) == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_li_vectorized_and_domain():
    xs = np.array([2.0, 3.0, 100.0])
    assert np.allclose(log_integral(xs), [float(mpmath.li(x)) for x in xs], rtol=1e-12)
    with pytest.raises(ValueError):
        log_integral(1.0)
    with pytest.raises(ValueError):
        li_of_exp(-1.0)


# ---- Poisson ---------------------------------------------------------------------


@given(st.floats(min_value=1e-12, max_value=1e6), st.integers(min_value=0, max_value=10**6))
def test_poisson_logpmf_against_mpmath(lam, k):
    mp = mpmath.mpf(lam)
    want = float(k * mpmath.log(mp) - mp - mpmath.loggamma(k + 1))
    assert poisson_logpmf(lam, k) == pytest.approx(want, rel=1e-11, abs=1e-9)


@given(st.floats(min_value=1e-3, max_value=2e5), st.integers(min_value=0, max_value=4000))
def test_poisson_tails_sum_to_one(lam, x):
    lc, ls = poisson_logcdf(lam, x), poisson_logsf(lam, x)
    assert math.exp(lc) + math.exp(ls) == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("lam,x", [(26.8, 302), (0.77, 60), (13708.9, 11922), (133240.0, 134363)])
def test_poisson_extreme_tails_against_mpmath(lam, x):
    mpmath.mp.dps = 60
    try:
        lam_mp = mpmath.mpf(lam)
        if x <= lam:
            want = mpmath.log(mpmath.nsum(lambda j: mpmath.exp(j * mpmath.log(lam_mp) - lam_mp - mpmath.loggamma(j + 1)), [0, x]))
            got = poisson_logcdf(lam, x)
        else:
            want = mpmath.log(mpmath.gammainc(x, 0, lam_mp, regularized=True))  # P(X >= x)
            got = poisson_logsf(lam, x - 1)
        assert got == pytest.approx(float(want), rel=1e-8)
    finally:
        mpmath.mp.dps = 15


def test_poisson_pmf_vectorized():
    ks = np.arange(10)
    assert np.allclose(poisson_pmf(2.5, ks), [math.exp(-2.5) * 2.5**k / math.factorial(k) for k in ks])
    assert log_factorial(170) == pytest.approx(math.lgamma(171))


# ---- polynomials and number fields -------------------------------------------------


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=6).filter(lambda c: c[-1] != 0))
def test_discriminant_matches_sympy(coeffs):
    x = sympy.Symbol("x")
    assert discriminant(coeffs) == sympy.discriminant(sympy.Poly(list(reversed(coeffs)), x))


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4))
def test_root_counting_for_products_of_linear_factors(roots):
    x = sympy.Symbol("x")
    coeffs = [int(c) for c in reversed(sympy.Poly(sympy.prod([x - r for r in roots]), x).all_coeffs())]
    assert count_real_roots(coeffs) == len(set(roots))
    M = 8  # interval [-sqrt 8, sqrt 8] holds the integers -2..2
    assert count_roots_in_sqrt_interval(coeffs, M) == sum(1 for r in roots if abs(r) <= 2)
    assert len(squarefree_part(coeffs)) - 1 == len(set(roots))


def test_number_field_arithmetic():
    K = NumberField((-1, -1, 1))  # golden ratio
    phi = (0, 1)
    assert K.mul(phi, phi) == (1, 1)
    assert K.norm(phi) == -1
    assert K.trace(phi) == 1
    assert list(K.charpoly(phi)) == [-1, -1, 1]
    assert K.is_rational((3, 0)) and not K.is_rational(phi)


@given(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), st.tuples(st.integers(-50, 50), st.integers(-50, 50)))
def test_norm_is_multiplicative(a, b):
    K = NumberField((-1, -1, 1))
    assert K.norm(K.mul(a, b)) == K.norm(a) * K.norm(b)


def test_subspace_membership():
    S = Subspace.from_rows([(1, 0)], 2)
    assert S.contains((5, 0)) and not S.contains((0, 1))
