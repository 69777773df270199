"""Model fitting: li-growth least squares, Poisson likelihood, Gaussian log-likelihood fits.

All two-parameter optimizations use the same deterministic recipe: evaluate
an 8x8 grid of starting points, then run Nelder-Mead from the best few.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping, Sequence

import contourpy
import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from . import ComputeError
from .arith.poisson import log_factorial
from .arith.special import li_of_exp

# li(x) vanishes at x = 1.45136923488338...; the log-log model needs li > 0.
_LI_ROOT_LOG = math.log(1.4513692348833810502839684858920274494)

GRID_SIZE = 8
_STARTS = 3
_NM_OPTIONS = {"xatol": 1e-10, "fatol": 1e-10, "maxiter": 10_000, "maxfev": 20_000}

LOG_A_RANGE = (math.log(1e-3), math.log(1e3))
LI_B_RANGE = (0.05, 1.2)
POISSON_B_RANGE = (-2.0, 1.0)


@dataclass(frozen=True)
class FitResult:
    params: tuple[float, float]
    objective: float
    iterations: int
    converged: bool
    coordinate_system: str
    note: str = ""

    @property
    def a(self) -> float:
        return self.params[0]

    @property
    def b(self) -> float:
        return self.params[1]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = list(self.params)
        return d


def _multistart(fun: Callable[[np.ndarray], float], xs: np.ndarray, ys: np.ndarray):
    """Grid multi-start then Nelder-Mead; returns (x, f, iterations, converged)."""
    starts = []
    for x in xs:
        for y in ys:
            p = np.array([x, y], dtype=float)
            starts.append((fun(p), p))
    starts = [s for s in starts if np.isfinite(s[0])]
    if not starts:
        raise ComputeError("objective is not finite anywhere on the starting grid")
    starts.sort(key=lambda s: (s[0], s[1][0], s[1][1]))
    best = None
    iters = 0
    for f0, p0 in starts[:_STARTS]:
        res = minimize(fun, p0, method="Nelder-Mead", options=_NM_OPTIONS)
        iters += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res
    return best.x, float(best.fun), iters, bool(best.success)


def _series_arrays(series: Sequence[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(series, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] != 2:
        raise ValueError("series must be a nonempty list of (X, C(X)) pairs")
    X, C = arr[:, 0], arr[:, 1]
    if np.any(X <= 1):
        raise ValueError("series X values must exceed 1")
    if not np.any(C > 0):
        raise ComputeError("all counts are zero; growth model is undefined")
    return X, C


def li_model(X, a: float, b: float):
    """``a * li(X^b)``."""
    return a * li_of_exp(b * np.log(np.asarray(X, dtype=float)))


def fit_li_loglog(series: Sequence[tuple[float, float]]) -> FitResult:
    """Least squares of ``log C`` against ``log(a li(X^b))`` over the points ``(log X, log C)``."""
    X, C = _series_arrays(series)
    if np.any(C < 1):
        raise ValueError("log-log fit needs C(X) >= 1 at every point")
    u, y = np.log(X), np.log(C)
    umin = float(u.min())

    def rss(p):
        log_a, b = p
        if b * umin <= _LI_ROOT_LOG or b * u.max() > 700:
            return math.inf
        r = y - log_a - np.log(li_of_exp(b * u))
        return float(r @ r)

    x, f, iters, ok = _multistart(rss, np.linspace(*LOG_A_RANGE, GRID_SIZE), np.linspace(*LI_B_RANGE, GRID_SIZE))
    return FitResult((float(math.exp(x[0])), float(x[1])), f, iters, ok, "loglog")


def fit_li_direct(series: Sequence[tuple[float, float]]) -> FitResult:
    """Least squares of ``C`` against ``a li(X^b)`` in untransformed coordinates."""
    X, C = _series_arrays(series)
    u = np.log(X)
    scale = float(C @ C)

    def rss(p):
        log_a, b = p
        if b <= 0 or b * u.max() > 700:
            return math.inf
        r = C - math.exp(log_a) * li_of_exp(b * u)
        return float(r @ r) / scale

    x, f, iters, ok = _multistart(rss, np.linspace(*LOG_A_RANGE, GRID_SIZE), np.linspace(*LI_B_RANGE, GRID_SIZE))
    return FitResult((float(math.exp(x[0])), float(x[1])), f * scale, iters, ok, "direct")


# ---- Poisson likelihood ----------------------------------------------------------


@dataclass(frozen=True)
class PoissonData:
    """Per-prime counts in the sufficient-statistic form used by the likelihood.

    With ``log lam_p = c + b t_p`` and ``t_p = log p - center`` the
    log-likelihood is ``c K + b T - e^c F(b) - L`` where ``K = sum k_p``,
    ``T = sum k_p t_p``, ``F(b) = sum exp(b t_p)`` and ``L = sum log k_p!``.
    """

    t: np.ndarray = field(repr=False)
    center: float
    K: float
    T: float
    L: float

    @classmethod
    def from_counts(cls, primes, counts) -> "PoissonData":
        primes = np.asarray(primes, dtype=np.int64)
        k = np.asarray(counts, dtype=np.int64)
        if primes.shape != k.shape:
            raise ValueError("primes and counts must have the same length")
        if k.size == 0:
            raise ValueError("no primes supplied")
        if np.any(k < 0):
            raise ValueError("counts must be nonnegative")
        logp = np.log(primes.astype(float))
        center = float(logp.mean())
        t = logp - center
        return cls(t, center, float(k.sum()), float(k @ t), float(log_factorial(k).sum()))

    def log_f(self, b) -> np.ndarray | float:
        b = np.asarray(b, dtype=float)
        out = logsumexp(np.multiply.outer(b, self.t), axis=-1)
        return float(out) if out.ndim == 0 else out

    def loglik_centered(self, c, b):
        c = np.asarray(c, dtype=float)
        return c * self.K + np.asarray(b) * self.T - np.exp(c + self.log_f(b)) - self.L

    def to_centered(self, a, b):
        return np.log(a) + np.asarray(b) * self.center, b

    def loglik(self, a, b):
        """``sum_p log Prob(Pois(a p^b) = k_p)``."""
        c, b = self.to_centered(a, b)
        return self.loglik_centered(c, b)


def _poisson_input(counts) -> PoissonData:
    if isinstance(counts, PoissonData):
        return counts
    if isinstance(counts, Mapping):
        keys = sorted(counts)
        return PoissonData.from_counts(keys, [counts[p] for p in keys])
    primes, k = counts
    return PoissonData.from_counts(primes, k)


def poisson_mle(counts) -> FitResult:
    """Maximum-likelihood ``(a, b)`` for independent ``k_p ~ Pois(a p^b)``.

    ``counts`` is a mapping prime -> k, a pair ``(primes, k)`` of arrays, or a
    :class:`PoissonData`.  If every count is zero the likelihood increases
    without bound as ``b -> -inf``; the returned sentinel then has
    ``params = (0.0, -inf)``, ``converged = False`` and ``note = "no-forms"``.
    """
    data = _poisson_input(counts)
    if data.K == 0:
        return FitResult((0.0, -math.inf), 0.0, 0, False, "poisson", "no-forms")

    def nll(p):
        v = -float(data.loglik_centered(p[0], p[1]))
        return v if np.isfinite(v) else math.inf

    bs = np.linspace(*POISSON_B_RANGE, GRID_SIZE)
    log_as = np.linspace(*LOG_A_RANGE, GRID_SIZE)
    # Seed points are the (log a, b) grid mapped to centered coordinates.
    starts = sorted(
        ((nll(np.array([la + b * data.center, b])), la + b * data.center, b) for la in log_as for b in bs),
        key=lambda s: s,
    )
    best = None
    iters = 0
    for _, c0, b0 in starts[:_STARTS]:
        res = minimize(nll, np.array([c0, b0]), method="Nelder-Mead", options=_NM_OPTIONS)
        iters += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res
    c, b = map(float, best.x)
    a = math.exp(c - b * data.center)
    return FitResult((a, b), -float(best.fun), iters, bool(best.success), "poisson")


@dataclass(frozen=True)
class LikelihoodRegion:
    """``{(a, b) : L(a, b) / L(a_hat, b_hat) > 10^-k}`` with its boundary polyline(s)."""

    k: int
    mle: tuple[float, float]
    max_loglik: float
    boundary: tuple[np.ndarray, ...] = field(repr=False)  # each an (m, 2) array of (a, b)
    loglik: Callable = field(repr=False, compare=False)

    @property
    def threshold(self) -> float:
        return self.max_loglik - self.k * math.log(10.0)

    def contains(self, a: float, b: float) -> bool:
        if a <= 0:
            return False
        return bool(self.loglik(a, b) > self.threshold)


def likelihood_region(counts, k: int, resolution: int = 241, max_expansions: int = 12) -> LikelihoodRegion:
    """Level set ``log L = log L_max - k log 10`` traced on an adaptively sized grid.

    The grid lives in centered coordinates ``(c, b)``; it starts from the
    quadratic approximation at the MLE and is enlarged until the level set no
    longer touches its border.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    data = _poisson_input(counts)
    fit = poisson_mle(data)
    if fit.note == "no-forms":
        raise ComputeError("likelihood is flat in a and unbounded in b: no forms to fit")
    a_hat, b_hat = fit.params
    c_hat = math.log(a_hat) + b_hat * data.center
    lmax = fit.objective
    drop = k * math.log(10.0)

    # Observed information in (c, b).
    w = np.exp(c_hat + b_hat * data.t)
    info = np.array([[w.sum(), w @ data.t], [w @ data.t, w @ data.t**2]])
    try:
        cov = np.linalg.inv(info)
        half = 1.5 * np.sqrt(2 * drop * np.diag(cov))
    except np.linalg.LinAlgError:
        half = np.array([5.0, 1.0])
    if not np.all(np.isfinite(half)) or np.any(half <= 0):
        half = np.array([5.0, 1.0])

    level = lmax - drop
    for _ in range(max_expansions):
        cs = np.linspace(c_hat - half[0], c_hat + half[0], resolution)
        bs = np.linspace(b_hat - half[1], b_hat + half[1], resolution)
        logf = data.log_f(bs)  # one pass over primes per b value
        Z = cs[None, :] * data.K + bs[:, None] * data.T - np.exp(cs[None, :] + logf[:, None]) - data.L
        border = np.concatenate([Z[0], Z[-1], Z[:, 0], Z[:, -1]])
        if np.all(border < level):
            break
        half = half * 2
    else:
        warnings.warn(f"likelihood region k={k} not closed within the search box (likelihood nearly flat)", RuntimeWarning, stacklevel=2)

    gen = contourpy.contour_generator(cs, bs, Z)
    lines = []
    for line in gen.lines(level):
        c_line, b_line = line[:, 0], line[:, 1]
        lines.append(np.column_stack([np.exp(c_line - b_line * data.center), b_line]))
    if not lines:
        warnings.warn(f"likelihood region k={k} is degenerate", RuntimeWarning, stacklevel=2)
    return LikelihoodRegion(k, (a_hat, b_hat), lmax, tuple(lines), data.loglik)


# ---- Gaussian fit ----------------------------------------------------------------


def fit_gaussian_loglik(curve: Sequence[tuple[float, float]]) -> FitResult:
    """Least squares of ``log y`` against ``-a beta^2 + b beta`` via the normal equations."""
    arr = np.asarray(curve, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("curve must be a list of (beta, value) pairs")
    if arr.shape[0] < 3:
        raise ComputeError("need at least 3 points to fit two parameters robustly")
    beta, val = arr[:, 0], arr[:, 1]
    if np.any(~(val > 0)):
        raise ValueError("curve values must be positive")
    design = np.column_stack([-beta**2, beta])
    y = np.log(val)
    gram = design.T @ design
    if abs(np.linalg.det(gram)) < 1e-300:
        raise ComputeError("degenerate beta grid")
    a, b = np.linalg.solve(gram, design.T @ y)
    r = y - design @ np.array([a, b])
    return FitResult((float(a), float(b)), float(r @ r), 0, True, "gaussian-log")
