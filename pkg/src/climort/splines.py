"""B-spline bases for seasonal and trend smooths.

Two constructions are provided. ``cyclic_basis`` builds cardinal cubic
B-splines wrapped around a fixed period, so every basis function (and hence
any fitted curve) is exactly periodic in value and all derivatives.
``open_basis`` builds a clamped cubic B-spline design matrix on an interval.
Both pair with second-difference coefficient penalties in the fitting code.
"""
from __future__ import annotations

import numpy as np
from scipy.interpolate import BSpline

from .errors import DomainError

__all__ = [
    "cubic_kernel",
    "cubic_kernel_deriv",
    "cyclic_basis",
    "cyclic_basis_deriv",
    "cyclic_penalty",
    "open_basis",
    "open_penalty",
]


def cubic_kernel(t: np.ndarray) -> np.ndarray:
    """Cardinal cubic B-spline kernel supported on [0, 4)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = (t >= 0) & (t < 1)
    out[m] = t[m] ** 3 / 6.0
    m = (t >= 1) & (t < 2)
    out[m] = (-3 * t[m] ** 3 + 12 * t[m] ** 2 - 12 * t[m] + 4) / 6.0
    m = (t >= 2) & (t < 3)
    out[m] = (3 * t[m] ** 3 - 24 * t[m] ** 2 + 60 * t[m] - 44) / 6.0
    m = (t >= 3) & (t < 4)
    out[m] = (4 - t[m]) ** 3 / 6.0
    return out


def cubic_kernel_deriv(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = (t >= 0) & (t < 1)
    out[m] = t[m] ** 2 / 2.0
    m = (t >= 1) & (t < 2)
    out[m] = (-9 * t[m] ** 2 + 24 * t[m] - 12) / 6.0
    m = (t >= 2) & (t < 3)
    out[m] = (9 * t[m] ** 2 - 48 * t[m] + 60) / 6.0
    m = (t >= 3) & (t < 4)
    out[m] = -((4 - t[m]) ** 2) / 2.0
    return out


def _cyclic_positions(x, n_basis: int, period: float, origin: float):
    if n_basis < 4:
        raise DomainError("cyclic basis needs at least 4 functions")
    h = period / n_basis
    return np.mod((np.asarray(x, dtype=float) - origin) / h, n_basis)


def cyclic_basis(x, n_basis: int, period: float = 12.0,
                 origin: float = 1.0) -> np.ndarray:
    """Design matrix of periodic cubic B-splines, shape (len(x), n_basis)."""
    u = _cyclic_positions(x, n_basis, period, origin)
    cols = []
    for k in range(n_basis):
        cols.append(cubic_kernel(np.mod(u - k, n_basis)))
    return np.column_stack(cols)


def cyclic_basis_deriv(x, n_basis: int, period: float = 12.0,
                       origin: float = 1.0) -> np.ndarray:
    """First derivative (w.r.t. x) of the periodic design matrix."""
    u = _cyclic_positions(x, n_basis, period, origin)
    h = period / n_basis
    cols = []
    for k in range(n_basis):
        cols.append(cubic_kernel_deriv(np.mod(u - k, n_basis)) / h)
    return np.column_stack(cols)


def cyclic_penalty(n_basis: int) -> np.ndarray:
    """Second-difference penalty with periodic wrap: D2' D2."""
    d2 = np.zeros((n_basis, n_basis))
    for k in range(n_basis):
        d2[k, (k - 1) % n_basis] = 1.0
        d2[k, k] = -2.0
        d2[k, (k + 1) % n_basis] = 1.0
    return d2.T @ d2


def open_basis(x, n_basis: int, lo: float, hi: float) -> np.ndarray:
    """Clamped cubic B-spline design matrix on [lo, hi].

    Values outside the interval are clamped to the boundary before
    evaluation, giving constant extrapolation of each basis function.
    """
    if n_basis < 4:
        raise DomainError("open basis needs at least 4 functions")
    if not hi > lo:
        raise DomainError("empty interval")
    n_interior = n_basis - 4
    interior = np.linspace(lo, hi, n_interior + 2)[1:-1] if n_interior > 0 else []
    knots = np.concatenate([[lo] * 4, interior, [hi] * 4])
    xc = np.clip(np.asarray(x, dtype=float), lo, hi)
    # nudge the right endpoint inside so the last basis function evaluates to 1
    xc = np.minimum(xc, hi - 1e-12 * max(1.0, abs(hi)))
    return BSpline.design_matrix(xc, knots, 3).toarray()


def open_penalty(n_basis: int) -> np.ndarray:
    """Second-difference penalty for an open coefficient sequence."""
    d2 = np.zeros((n_basis - 2, n_basis))
    for k in range(n_basis - 2):
        d2[k, k] = 1.0
        d2[k, k + 1] = -2.0
        d2[k, k + 2] = 1.0
    return d2.T @ d2
