"""Log-space Poisson probabilities.

Means in this package range from ~1e-6 to ~1e5, so everything is computed
from ``k log(lam) - lam - log k!`` and summed with logsumexp.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, logsumexp

_LOGFACT_SIZE = 1 << 16
_LOGFACT = gammaln(np.arange(_LOGFACT_SIZE, dtype=float) + 1.0)


def log_factorial(k):
    """``log(k!)`` from a precomputed table (falls back to gammaln beyond it)."""
    k = np.asarray(k, dtype=np.int64)
    if k.size and k.min() < 0:
        raise ValueError("log_factorial of negative integer")
    if k.size == 0 or k.max() < _LOGFACT_SIZE:
        return _LOGFACT[k]
    return gammaln(k + 1.0)


def _check_lam(lam):
    lam = np.asarray(lam, dtype=float)
    if np.any(~(lam > 0)):
        raise ValueError("Poisson mean must be positive")
    return lam


def _stirling_error(k: np.ndarray) -> np.ndarray:
    """``log k! - (k + 1/2) log k + k - log(2 pi)/2`` for ``k >= 1``."""
    kf = k.astype(float)
    small = k < 16
    out = np.empty_like(kf)
    ks = kf[small]
    out[small] = log_factorial(k[small]) - (ks + 0.5) * np.log(ks) + ks - _HALF_LOG_2PI
    kb = kf[~small]
    inv2 = 1.0 / (kb * kb)
    out[~small] = (1 / 12 - inv2 * (1 / 360 - inv2 * (1 / 1260 - inv2 * (1 / 1680 - inv2 / 1188)))) / kb
    return out


def _deviance(k: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """``k log(k/lam) + lam - k`` without cancellation when ``k ~ lam``."""
    kf = k.astype(float)
    d = kf - lam
    out = kf * np.log(kf / lam) - d
    near = np.abs(d) < 0.1 * (kf + lam)
    if np.any(near):
        kn, dn, ln = kf[near], d[near], lam[near]
        v = dn / (kn + ln)
        s = dn * v
        term = 2 * kn * v
        v2 = v * v
        for j in range(1, 60):
            term = term * v2
            s = s + term / (2 * j + 1)
        out[near] = s
    return out


_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def poisson_logpmf(lam, k):
    """``log Prob(Pois(lam) = k)``; broadcasts over ``lam`` and ``k``.

    Mathematically ``k log(lam) - lam - log k!``; for ``k >= 1`` the terms are
    regrouped (Stirling remainder plus a deviance term) so that the large,
    nearly cancelling pieces never meet in floating point.
    """
    lam = _check_lam(lam)
    k = np.asarray(k, dtype=np.int64)
    if k.size and k.min() < 0:
        raise ValueError("Poisson count must be nonnegative")
    lam_b, k_b = np.broadcast_arrays(lam, k)
    out = np.empty(lam_b.shape, dtype=float)
    zero = k_b == 0
    out[zero] = -lam_b[zero]
    pos = ~zero
    if np.any(pos):
        kp, lp = k_b[pos], lam_b[pos]
        out[pos] = -_stirling_error(kp) - _deviance(kp, lp) - _HALF_LOG_2PI - 0.5 * np.log(kp.astype(float))
    return float(out) if out.ndim == 0 else out


def poisson_pmf(lam, k):
    out = np.exp(poisson_logpmf(lam, k))
    return float(out) if np.ndim(out) == 0 else out


def _window(lam: float) -> int:
    return int(40 * math.sqrt(lam) + 50)


def _logsum_range(lam: float, lo: int, hi: int) -> float:
    ks = np.arange(lo, hi + 1, dtype=np.int64)
    return float(logsumexp(poisson_logpmf(lam, ks)))


def poisson_logcdf(lam: float, x: int) -> float:
    """``log Prob(Pois(lam) <= x)``."""
    lam = float(_check_lam(lam))
    x = int(x)
    if x < 0:
        return -math.inf
    if x >= lam:
        return math.log1p(-math.exp(poisson_logsf(lam, x))) if x < lam + _window(lam) else 0.0
    return _logsum_range(lam, max(0, x - _window(lam)), x)


def poisson_logsf(lam: float, x: int) -> float:
    """``log Prob(Pois(lam) > x)``."""
    lam = float(_check_lam(lam))
    x = int(x)
    if x < 0:
        return 0.0
    if x + 1 <= lam:
        return math.log1p(-math.exp(poisson_logcdf(lam, x)))
    return _logsum_range(lam, x + 1, x + 1 + _window(lam))


def poisson_cdf(lam: float, x: int) -> float:
    return math.exp(poisson_logcdf(lam, x))


def poisson_sf(lam: float, x: int) -> float:
    return math.exp(poisson_logsf(lam, x))
