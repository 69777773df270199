"""Same-level collision statistics under independent per-prime Poisson models.

For each prime p let ``Z_p ~ Pois(a p^b)`` and ``S(k) = #{p : Z_p = k}``.
``S(k)`` is a sum of independent Bernoulli variables, approximately Poisson
with mean ``E[S(k)]``; Le Cam's inequality bounds the total-variation error.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import ComputeError
from .arith.poisson import poisson_logcdf, poisson_logpmf, poisson_logsf, poisson_pmf
from .arith.primes import range_primes
from .fitmodels import FitResult, poisson_mle

# Extra zero-count rows appended past the largest observed k.
TRAILING_ROWS = 2
_TINY = 1e-300


def _means(a: float, b: float, primes=None) -> np.ndarray:
    if not a > 0:
        raise ValueError("a must be positive")
    ps = range_primes() if primes is None else np.asarray(primes, dtype=np.int64)
    log_lam = math.log(a) + b * np.log(ps.astype(float))
    return np.maximum(np.exp(log_lam), _TINY)


def success_probabilities(a: float, b: float, k: int, primes=None) -> np.ndarray:
    """``Prob(Pois(a p^b) = k)`` for each prime, ascending."""
    return poisson_pmf(_means(a, b, primes), int(k))


def expected_s(a: float, b: float, k: int, primes=None) -> float:
    """``E[S_{a,b}(k)] = sum_p Prob(Pois(a p^b) = k)`` over range primes."""
    return float(np.sum(success_probabilities(a, b, k, primes)))


def lecam_bound(a: float, b: float, k: int, primes=None) -> float:
    """``2 min(1, 1/E) sum_p Prob(Pois(a p^b) = k)^2``."""
    q = success_probabilities(a, b, k, primes)
    E = float(np.sum(q))
    factor = 1.0 if E <= 1.0 else 1.0 / E
    return 2.0 * factor * float(q @ q)


def log_rho(lam: float, x: int) -> float:
    """Natural log of the two-sided extremeness probability."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    x = int(x)
    if x < 0:
        raise ValueError("x must be a nonnegative integer")
    if x <= lam:
        return poisson_logcdf(lam, x)
    return poisson_logsf(lam, x - 1)


def rho(lam: float, x: int) -> float:
    """``F_lam(x)`` if ``x <= lam`` else ``1 - F_lam(x - 1)``; may underflow to 0."""
    return math.exp(log_rho(lam, x))


@dataclass(frozen=True)
class CollisionRow:
    disc: int
    k: int
    Q: int
    E: float
    rho: float
    log10_rho: float
    R: float

    def rho_text(self) -> str:
        """``rho`` formatted for tables; below 1e-300 the base-10 exponent is shown instead."""
        if self.rho >= 1e-300:
            return f"{self.rho:.2g}"
        return f"10^{self.log10_rho:.1f}"

    def to_dict(self) -> dict:
        return asdict(self)


def collision_rows(disc: int, q_by_k: dict[int, int], fit: FitResult, primes=None) -> list[CollisionRow]:
    a, b = fit.params
    kmax = max([k for k, q in q_by_k.items() if q > 0], default=0)
    rows = []
    for k in range(kmax + TRAILING_ROWS + 1):
        Q = int(q_by_k.get(k, 0))
        E = expected_s(a, b, k, primes)
        R = lecam_bound(a, b, k, primes)
        if E > 0:
            lr = log_rho(E, Q)
        else:
            lr = 0.0 if Q == 0 else -math.inf
        rows.append(CollisionRow(disc, k, Q, E, math.exp(lr), lr / math.log(10), R))
    return rows


def collision_report(catalog, disc: int) -> tuple[FitResult, list[CollisionRow]]:
    """Fit the Poisson model to the orbit counts of ``disc`` and tabulate ``Q``, ``E``, rho, ``R``."""
    from .dataset.catalog import counts_by_prime

    primes, k = counts_by_prime(catalog, disc)
    if not np.any(k):
        raise ComputeError(f"no forms with discriminant {disc}; the Poisson model is empty")
    fit = poisson_mle((primes, k))
    q_by_k: dict[int, int] = {}
    for v in k:
        q_by_k[int(v)] = q_by_k.get(int(v), 0) + 1
    return fit, collision_rows(disc, q_by_k, fit, primes)


# ---- Le Cam validation -----------------------------------------------------------


def poisson_binomial_pmf(q) -> np.ndarray:
    """Exact distribution of a sum of independent Bernoulli(q_i) variables."""
    dist = np.array([1.0])
    for qi in np.asarray(q, dtype=float):
        nxt = np.zeros(len(dist) + 1)
        nxt[:-1] += dist * (1 - qi)
        nxt[1:] += dist * qi
        dist = nxt
    return dist


def _tv_to_poisson(dist: np.ndarray, mean: float) -> float:
    j = np.arange(len(dist))
    if mean > 0:
        pois = np.exp(poisson_logpmf(mean, j))
    else:
        pois = (j == 0).astype(float)
    tail = max(0.0, 1.0 - float(pois.sum()))
    return 0.5 * (float(np.abs(dist - pois).sum()) + tail)


@dataclass(frozen=True)
class LeCamCheck:
    bound: float
    tv_exact: float
    tv_sampled: float
    trials: int

    # Le Cam's inequality bounds the L1 distance, which is twice the total variation.
    @property
    def l1_exact(self) -> float:
        return 2.0 * self.tv_exact

    @property
    def l1_sampled(self) -> float:
        return 2.0 * self.tv_sampled


def lecam_monte_carlo(a: float, b: float, k: int, primes, trials: int = 100_000, seed: int = 0) -> LeCamCheck:
    """Simulate ``S(k)`` over a small prime set and compare it with ``Pois(E[S(k)])``.

    Reports the exact total-variation distance (from the Poisson-binomial
    distribution) next to a sampled estimate.
    """
    primes = np.asarray(primes, dtype=np.int64)
    lam = _means(a, b, primes)
    q = poisson_pmf(lam, int(k))
    mean = float(q.sum())
    exact = _tv_to_poisson(poisson_binomial_pmf(q), mean)
    rng = np.random.default_rng(seed)
    s = np.zeros(trials, dtype=np.int64)
    chunk = 10_000
    for start in range(0, trials, chunk):
        n = min(chunk, trials - start)
        z = rng.poisson(lam[None, :], size=(n, len(lam)))
        s[start:start + n] = (z == k).sum(axis=1)
    emp = np.bincount(s, minlength=len(primes) + 1) / trials
    sampled = _tv_to_poisson(emp, mean)
    return LeCamCheck(lecam_bound(a, b, k, primes), exact, sampled, trials)
