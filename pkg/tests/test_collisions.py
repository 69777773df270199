import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import poisson
from scipy.optimize import brentq

from newform_stats import ComputeError
from newform_stats.arith.primes import range_primes
from newform_stats.collisions import (
    collision_report,
    collision_rows,
    expected_s,
    lecam_bound,
    lecam_monte_carlo,
    log_rho,
    poisson_binomial_pmf,
    rho,
)
from newform_stats.dataset import Catalog
from newform_stats.fitmodels import FitResult

from conftest import synthetic_records
from reference_values import COLLISIONS

LECAM_CONFIGS = [(0.5, -0.2, 0), (0.5, -0.2, 1), (2.0, -0.17, 1), (2.0, -0.17, 2), (0.05, 0.1, 1)]


def _subset():
    ps = range_primes()
    sub = np.random.default_rng(0).choice(ps, 500, replace=False)
    return np.sort(sub)


# ---- rho ----------------------------------------------------------------------------


@given(st.floats(0.01, 500), st.integers(0, 1000))
def test_rho_matches_scipy(lam, x):
    want = poisson.cdf(x, lam) if x <= lam else poisson.sf(x - 1, lam)
    if want > 1e-300:
        assert rho(lam, x) == pytest.approx(want, rel=1e-8)


def test_rho_deep_tail_in_log_space():
    # Far beyond double-precision range: only the log is representable.
    lr = log_rho(26.8, 302)
    assert lr / math.log(10) == pytest.approx(-200, abs=1)
    assert rho(26.8, 302) < 1e-199


def test_rho_argument_checks():
    with pytest.raises(ValueError):
        log_rho(0.0, 1)
    with pytest.raises(ValueError):
        log_rho(1.0, -1)


# ---- E and R -----------------------------------------------------------------------


def test_expected_s_sums_to_prime_count():
    ps = _subset()
    total = sum(expected_s(0.7, -0.1, k, ps) for k in range(60))
    assert total == pytest.approx(len(ps), rel=1e-12)


def test_lecam_bound_formula():
    ps = _subset()
    q = poisson.pmf(1, 2.0 * ps.astype(float) ** -0.17)
    E = q.sum()
    assert lecam_bound(2.0, -0.17, 1, ps) == pytest.approx(2 * min(1, 1 / E) * (q**2).sum(), rel=1e-12)


def test_poisson_binomial_against_convolution_oracle():
    q = np.array([0.1, 0.5, 0.25, 0.9])
    dist = poisson_binomial_pmf(q)
    want = np.array([1.0])
    for qi in q:
        want = np.convolve(want, [1 - qi, qi])
    assert np.allclose(dist, want)


@pytest.mark.parametrize("a,b,k", LECAM_CONFIGS)
def test_lecam_inequality_holds(a, b, k):
    check = lecam_monte_carlo(a, b, k, _subset(), trials=100_000, seed=11)
    assert check.l1_exact <= check.bound
    assert check.l1_sampled <= check.bound


def test_lecam_monte_carlo_is_seeded():
    ps = _subset()
    assert lecam_monte_carlo(0.5, -0.2, 1, ps, trials=2000, seed=3) == lecam_monte_carlo(0.5, -0.2, 1, ps, trials=2000, seed=3)


# ---- tables -----------------------------------------------------------------------


def _solve_from_two_rows(E0, E1):
    """(a, b) with E[S(0)] = E0 and E[S(1)] = E1 over the range primes."""
    ps = range_primes()

    def a_for(b):
        return brentq(lambda la: expected_s(math.exp(la), b, 0, ps) - E0, -30, 10)

    def g(b):
        return expected_s(math.exp(a_for(b)), b, 1, ps) - E1

    b = brentq(g, -0.9, -0.01)
    return math.exp(a_for(b)), b


@pytest.mark.parametrize("disc", [1, 5])
def test_expected_counts_consistent_with_reference(disc):
    rows = COLLISIONS[disc]
    a, b = _solve_from_two_rows(rows[0][2], rows[1][2])
    ps = range_primes()
    for k, _, E, _, R in rows[2:6]:
        assert expected_s(a, b, k, ps) == pytest.approx(E, rel=0.03)
        assert lecam_bound(a, b, k, ps) == pytest.approx(R, rel=0.06)


@pytest.mark.parametrize("disc", [1, 5, 8, 49])
def test_rho_from_reference_E_and_Q(disc):
    for k, Q, E, rho_ref, _ in COLLISIONS[disc]:
        got = log_rho(E, Q) / math.log(10)
        assert abs(got - math.log10(rho_ref)) <= 1.0, (disc, k)


def test_collision_rows_cover_observed_k_plus_two():
    fit = FitResult((0.5, -0.2), 0.0, 0, True, "poisson")
    rows = collision_rows(5, {0: 100, 1: 5, 3: 1}, fit, range_primes()[:106])
    assert [r.k for r in rows] == [0, 1, 2, 3, 4, 5]
    assert rows[2].Q == 0
    assert all(r.rho_text() for r in rows)


def test_collision_report_on_synthetic_catalog():
    cat = Catalog(tuple(synthetic_records(4, 600, 120)))
    fit, rows = collision_report(cat, 1)
    assert sum(r.Q for r in rows) == len(range_primes())
    assert sum(r.E for r in rows) == pytest.approx(len(range_primes()), rel=1e-6)
    with pytest.raises(ComputeError):
        collision_report(cat, 8)
