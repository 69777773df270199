"""Logarithmic integral by composite Gauss-Legendre quadrature."""

from __future__ import annotations

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061

# 20-point rule per panel; panel count grows with |log x| so that each panel
# spans at most two e-foldings of the integrand.
_NODES = 20
_MIN_PANELS = 8
_gl_x, _gl_w = np.polynomial.legendre.leggauss(_NODES)


def _rule(panels: int) -> tuple[np.ndarray, np.ndarray]:
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    s = (mid[:, None] + half[:, None] * _gl_x[None, :]).ravel()
    w = (half[:, None] * _gl_w[None, :]).ravel()
    return s, w


def log_integral(x):
    """Principal-value ``li(x) = PV int_0^x dt/log t`` for ``x > 1``.

    Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 1)):
        raise ValueError("log_integral requires x > 1")
    return li_of_exp(np.log(arr))


def li_of_exp(u):
    """``li(exp(u))`` for ``u > 0`` without forming exp(u) explicitly.

    Uses ``li(e^u) = gamma + log(u) + int_0^1 expm1(u s)/s ds``; the integrand
    is smooth, so the singularity of 1/log t at t = 1 needs no special care.
    """
    arr = np.asarray(u, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("li_of_exp requires u > 0")
    umax = float(arr.max()) if arr.size else 0.0
    if umax > 709:
        raise OverflowError("li_of_exp argument too large")
    s, w = _rule(max(_MIN_PANELS, math.ceil(umax / 2)))
    flat = arr.reshape(-1)
    out = EULER_GAMMA + np.log(flat) + (np.expm1(flat[:, None] * s[None, :]) / s[None, :]) @ w
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out
