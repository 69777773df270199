"""Atkin-Lehner sign statistics under a dimension-weighted Bernoulli model.

Under the model with parameter beta, an orbit at prime level p has sign +1
with probability ``d+^beta / (d+^beta + d-^beta)`` where ``d+`` and ``d-`` are
the dimensions of the two Atkin-Lehner eigenspaces of ``S_2(p)``.  Writing
``x = log(d-/d+)`` this is ``1 / (1 + exp(beta x))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import minimize_scalar

from .arith.dims import dim_split, dim_splits
from .arith.primes import RANGE_HI, RANGE_LO

DimMode = Literal["exact", "approximate", "mixed"]

# "mixed" switches to the leading-term approximation above this level.
MIXED_CUTOFF = 10**5
BETA_GRID = np.round(np.arange(-5.0, 15.0 + 1e-9, 0.05), 10)
SN_OFFSET = 64
# Odd primes whose coefficients are checked for the rational 2-torsion of the SN curve.
_SN_PARITY_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class SignModel:
    beta: float
    dim_mode: DimMode = "exact"


def dimensions(levels, mode: DimMode = "exact") -> tuple[np.ndarray, np.ndarray]:
    """``(d+, d-)`` as float arrays for an array of prime levels."""
    levels = np.asarray(levels, dtype=np.int64)
    if mode == "mixed":
        plus = np.empty(len(levels))
        minus = np.empty(len(levels))
        small = levels <= MIXED_CUTOFF
        for sel, m in ((small, "exact"), (~small, "approximate")):
            if np.any(sel):
                p_, m_ = dim_splits(levels[sel], m)
                plus[sel], minus[sel] = p_, m_
        return plus, minus
    plus, minus = dim_splits(levels, mode)
    return np.asarray(plus, dtype=float), np.asarray(minus, dtype=float)


def log_dim_ratio(levels, mode: DimMode = "exact") -> np.ndarray:
    """``log(d- / d+)`` per level; raises ValueError where a dimension vanishes."""
    plus, minus = dimensions(levels, mode)
    if np.any(plus <= 0) or np.any(minus <= 0):
        bad = np.asarray(levels)[(plus <= 0) | (minus <= 0)]
        raise ValueError(f"an Atkin-Lehner eigenspace is zero-dimensional at level(s) {bad[:5].tolist()}")
    return np.log(minus) - np.log(plus)


def sign_prob(model: SignModel, p: int) -> float:
    """``Prob(Z = +1)`` at level ``p``."""
    mode = model.dim_mode
    if mode == "mixed":
        mode = "exact" if p <= MIXED_CUTOFF else "approximate"
    split = dim_split(int(p), mode)
    if split.dim_plus <= 0 or split.dim_minus <= 0:
        raise ValueError(f"dim S_2^+-({p}) = ({split.dim_plus}, {split.dim_minus}); model undefined")
    if model.beta == 0:
        return 0.5
    x = math.log(split.dim_minus) - math.log(split.dim_plus)
    return 1.0 / (1.0 + math.exp(model.beta * x))


# ---- Setzer-Neumann forms --------------------------------------------------------


def detect_sn(p: int) -> bool:
    """True iff ``p - 64`` is a perfect square."""
    m = int(p) - SN_OFFSET
    return m >= 0 and math.isqrt(m) ** 2 == m


def is_sn_record(rec, table=None) -> bool:
    """Degree-1 record at a level ``u^2 + 64``.

    If a coefficient table is supplied, additionally require ``a(q)`` even for
    small odd primes ``q``, which singles out the isogeny class with a rational
    2-torsion point when several curves share the level.
    """
    if rec.degree != 1 or not detect_sn(rec.level):
        return False
    if table is None:
        return True
    for q in _SN_PARITY_PRIMES:
        if q == rec.level or q > table.max_n or q not in table.rows:
            continue
        if table.rows[q][0] % 2:
            return False
    return True


@dataclass(frozen=True)
class SNCensus:
    records: tuple  # (level, orbit, al_sign)
    levels_checked: int

    @property
    def count(self) -> int:
        return len(self.records)

    @property
    def sign_counts(self) -> dict[int, int]:
        out = {1: 0, -1: 0}
        for _, _, s in self.records:
            out[s] += 1
        return out


def sn_census(catalog, lower: float = RANGE_LO, upper: float = RANGE_HI) -> SNCensus:
    found = []
    recs = catalog.query(degree=1, below=upper, above=lower)
    for r in recs:
        if detect_sn(r.level) and is_sn_record(r, catalog.coefficient_table(r)):
            found.append((r.level, r.orbit, r.al_sign))
    return SNCensus(tuple(found), len({r.level for r in recs}))


# ---- likelihoods -----------------------------------------------------------------


def _forms(catalog, d: int, exclude_sn: bool) -> tuple[np.ndarray, np.ndarray]:
    recs = catalog.query(degree=d, below=RANGE_HI, above=RANGE_LO)
    if exclude_sn:
        recs = [r for r in recs if not is_sn_record(r, catalog.coefficient_table(r))]
    return (np.array([r.level for r in recs], dtype=np.int64), np.array([r.al_sign for r in recs], dtype=np.int64))


def log_likelihood(levels, signs, beta, mode: DimMode = "exact", normalize: bool = True):
    """``log Prob(signs | beta)``, plus ``n log 2`` when ``normalize``; vectorized over beta."""
    levels = np.asarray(levels, dtype=np.int64)
    signs = np.asarray(signs, dtype=float)
    if len(levels) == 0:
        return np.zeros(np.shape(beta)) if np.ndim(beta) else 0.0
    x = log_dim_ratio(levels, mode) * signs
    beta_arr = np.atleast_1d(np.asarray(beta, dtype=float))
    ll = -np.logaddexp(0.0, np.multiply.outer(beta_arr, x)).sum(axis=1)
    if normalize:
        ll = ll + len(levels) * math.log(2.0)
    return float(ll[0]) if np.ndim(beta) == 0 else ll


def data_likelihood(catalog, d: int, beta: float, exclude_sn: bool = False, mode: DimMode = "exact") -> float:
    """``Prob(data_d | beta) * 2^#F(d)`` over forms with level in the studied range."""
    levels, signs = _forms(catalog, d, exclude_sn)
    return math.exp(log_likelihood(levels, signs, beta, mode))


@dataclass(frozen=True)
class LikelihoodCurve:
    degree: int
    exclude_sn: bool
    betas: np.ndarray
    values: np.ndarray  # normalized likelihoods
    beta_hat: float
    value_hat: float
    n_forms: int

    def points(self) -> list[tuple[float, float]]:
        return [(float(b), float(v)) for b, v in zip(self.betas, self.values)]


def mle_beta(levels, signs, mode: DimMode = "exact", bounds=(-60.0, 60.0)) -> tuple[float, float]:
    """``(beta_hat, normalized log-likelihood at beta_hat)``; the log-likelihood is concave in beta."""
    if len(levels) == 0:
        return 0.0, 0.0
    res = minimize_scalar(lambda b: -log_likelihood(levels, signs, b, mode), bounds=bounds,
                          method="bounded", options={"xatol": 1e-10})
    return float(res.x), -float(res.fun)


def likelihood_curve(catalog, d: int, exclude_sn: bool = False, betas=BETA_GRID, mode: DimMode = "exact") -> LikelihoodCurve:
    levels, signs = _forms(catalog, d, exclude_sn)
    betas = np.asarray(betas, dtype=float)
    values = np.exp(log_likelihood(levels, signs, betas, mode))
    b_hat, ll_hat = mle_beta(levels, signs, mode)
    return LikelihoodCurve(d, exclude_sn, betas, values, b_hat, math.exp(ll_hat), len(levels))


# ---- moments of the log-likelihood ---------------------------------------------------


def dimension_sum(levels, mode: DimMode = "exact") -> float:
    """``sum (d- - d+)^2 / N^2`` over the given levels."""
    levels = np.asarray(levels, dtype=np.int64)
    if len(levels) == 0:
        return 0.0
    plus, minus = dimensions(levels, mode)
    return float(np.sum(((minus - plus) / levels.astype(float)) ** 2))


def _levels_of(source, d: int | None, exclude_sn: bool) -> np.ndarray:
    if hasattr(source, "query"):
        return _forms(source, d, exclude_sn)[0]
    return np.asarray(source, dtype=np.int64)


def expected_loglik(source, d: int | None, alpha: float, beta: float, exclude_sn: bool = False,
                    mode: DimMode = "exact") -> float:
    """Leading-term mean of ``log Prob(Z_alpha | beta)``; ``source`` is a catalog or a level array."""
    levels = _levels_of(source, d, exclude_sn)
    return (144 * alpha * beta - 72 * beta**2) * dimension_sum(levels, mode) - len(levels) * math.log(2.0)


def var_loglik(source, d: int | None, beta: float, exclude_sn: bool = False, mode: DimMode = "exact") -> float:
    """Leading-term variance of ``log Prob(Z_alpha | beta)`` (independent of alpha)."""
    levels = _levels_of(source, d, exclude_sn)
    return 144 * beta**2 * dimension_sum(levels, mode)


@dataclass(frozen=True)
class LoglikSample:
    mean: float
    variance: float
    stderr: float
    trials: int


def empirical_loglik_distribution(source, d: int | None, alpha: float, beta: float, trials: int = 10_000,
                                  seed: int = 0, exclude_sn: bool = False, mode: DimMode = "exact") -> LoglikSample:
    """Sample ``log Prob(Z_alpha | beta)`` (unnormalized) by drawing signs from the alpha-model.

    Uses a Philox counter-based generator so runs are reproducible for a seed.
    """
    if trials < 1000:
        raise ValueError("trials must be at least 1000")
    levels = _levels_of(source, d, exclude_sn)
    if len(levels) == 0:
        return LoglikSample(0.0, 0.0, 0.0, trials)
    x = log_dim_ratio(levels, mode)
    p_plus = 1.0 / (1.0 + np.exp(alpha * x))
    # log Prob(Z = w | beta) = -log(1 + exp(beta w x)).
    lp_plus = -np.logaddexp(0.0, beta * x)
    lp_minus = -np.logaddexp(0.0, -beta * x)
    rng = np.random.Generator(np.random.Philox(seed))
    samples = np.empty(trials)
    chunk = max(1, 2_000_000 // len(levels))
    for start in range(0, trials, chunk):
        n = min(chunk, trials - start)
        plus = rng.random((n, len(levels))) < p_plus
        samples[start:start + n] = np.where(plus, lp_plus, lp_minus).sum(axis=1)
    var = float(samples.var(ddof=1))
    return LoglikSample(float(samples.mean()), var, math.sqrt(var / trials), trials)
