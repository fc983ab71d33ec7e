"""Shared numerical kernels.

Small, pure routines used throughout the package: leading SVD factor,
Cholesky with a validity check, nearest-correlation projection, normal and
Student-t distribution functions, a one-sample Kolmogorov-Smirnov statistic,
and a penalized weighted least squares solver.
"""
from __future__ import annotations

import numpy as np
from scipy import special
from scipy.linalg import cho_factor, cho_solve

from .errors import DomainError, NoConvergence, NotPositiveDefinite, SingularBasis

__all__ = [
    "svd_leading",
    "cholesky_factor",
    "nearest_correlation",
    "normal_cdf",
    "normal_quantile",
    "student_t_cdf",
    "student_t_pdf",
    "student_t_quantile",
    "ks_statistic_uniform",
    "ks_pvalue",
    "solve_penalized",
]


def svd_leading(matrix: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Leading singular triple (sigma, u, v) of a dense matrix.

    Satisfies ``||A v - sigma u|| <= 1e-10 * sigma`` up to roundoff in the
    degenerate sigma=0 case.
    """
    a = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix contains non-finite entries")
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"SVD failed to converge: {exc}") from exc
    sigma = float(s[0])
    uvec, vvec = u[:, 0], vt[0, :]
    if sigma > 0.0:
        resid = float(np.linalg.norm(a @ vvec - sigma * uvec))
        if resid > 1e-8 * sigma:
            raise NoConvergence(
                f"leading singular triple residual {resid:.3e} exceeds tolerance")
    return sigma, uvec, vvec


def cholesky_factor(sigma: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor; raises NotPositiveDefinite on failure."""
    try:
        return np.linalg.cholesky(np.asarray(sigma, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def nearest_correlation(matrix: np.ndarray, *, eig_floor: float = 1e-10,
                        tol: float = 1e-10, max_iter: int = 200) -> np.ndarray:
    """Nearest correlation matrix by alternating projections.

    Dykstra-corrected projections onto the PSD cone (eigenvalues floored at
    ``eig_floor``) and the unit-diagonal affine set. Inputs that are already
    valid correlation matrices are returned unchanged.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("input must be square")
    if np.max(np.abs(a - a.T)) > 1e-12 * max(1.0, np.max(np.abs(a))):
        raise DomainError("input must be symmetric")
    a = 0.5 * (a + a.T)

    if np.allclose(np.diag(a), 1.0, atol=1e-14):
        w = np.linalg.eigvalsh(a)
        if w.min() >= eig_floor:
            return a.copy()

    y = a.copy()
    ds = np.zeros_like(a)
    for _ in range(max_iter):
        r = y - ds
        w, v = np.linalg.eigh(0.5 * (r + r.T))
        x = (v * np.maximum(w, eig_floor)) @ v.T
        x = 0.5 * (x + x.T)
        ds = x - r
        y_next = x.copy()
        np.fill_diagonal(y_next, 1.0)
        if np.max(np.abs(y_next - y)) < tol:
            y = y_next
            break
        y = y_next
    else:
        raise NoConvergence(
            f"nearest-correlation projection did not converge in {max_iter} iterations")

    # final PSD cleanup so Cholesky always succeeds downstream
    w, v = np.linalg.eigh(y)
    if w.min() < eig_floor:
        y = (v * np.maximum(w, eig_floor)) @ v.T
        d = np.sqrt(np.diag(y))
        y = y / np.outer(d, d)
        y = 0.5 * (y + y.T)
    np.fill_diagonal(y, 1.0)
    return y


def normal_cdf(x):
    return special.ndtr(x)


def normal_quantile(p):
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise DomainError("p must lie strictly inside (0, 1)")
    return special.ndtri(p)


def student_t_cdf(x, nu: float):
    """CDF of the Student-t distribution via the regularized incomplete beta."""
    if nu <= 0.0:
        raise DomainError("nu must be positive")
    x = np.asarray(x, dtype=float)
    ib = special.betainc(nu / 2.0, 0.5, nu / (nu + x * x))
    return np.where(x >= 0.0, 1.0 - 0.5 * ib, 0.5 * ib)


def student_t_pdf(x, nu: float):
    if nu <= 0.0:
        raise DomainError("nu must be positive")
    x = np.asarray(x, dtype=float)
    logc = (special.gammaln((nu + 1.0) / 2.0) - special.gammaln(nu / 2.0)
            - 0.5 * np.log(nu * np.pi))
    return np.exp(logc - 0.5 * (nu + 1.0) * np.log1p(x * x / nu))


def student_t_quantile(p, nu: float):
    """Student-t quantile by bracketed Newton with bisection fallback.

    Antisymmetric about p = 0.5 by construction; accepts scalars or arrays.
    """
    if nu <= 0.0:
        raise DomainError("nu must be positive")
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p_arr <= 0.0) or np.any(p_arr >= 1.0):
        raise DomainError("p must lie strictly inside (0, 1)")

    # work on the upper half and mirror, so q(0.5) is exactly 0
    sign = np.where(p_arr >= 0.5, 1.0, -1.0)
    ph = np.where(p_arr >= 0.5, p_arr, 1.0 - p_arr)

    # bracket: lo = 0 always works; expand hi geometrically
    lo = np.zeros_like(ph)
    hi = np.full_like(ph, 2.0)
    for _ in range(400):
        need = student_t_cdf(hi, nu) < ph
        if not np.any(need):
            break
        hi = np.where(need, hi * 2.0, hi)
    else:
        raise NoConvergence("failed to bracket Student-t quantile")

    x = np.where(special.ndtri(np.clip(ph, 1e-300, 1 - 1e-16)) > 0,
                 special.ndtri(np.clip(ph, 1e-300, 1 - 1e-16)), 1.0)
    x = np.clip(x, lo, hi)
    for _ in range(100):
        f = student_t_cdf(x, nu) - ph
        lo = np.where(f < 0.0, x, lo)
        hi = np.where(f > 0.0, x, hi)
        step = f / np.maximum(student_t_pdf(x, nu), 1e-300)
        x_new = x - step
        bad = (x_new <= lo) | (x_new >= hi) | ~np.isfinite(x_new)
        x_new = np.where(bad, 0.5 * (lo + hi), x_new)
        if np.max(np.abs(student_t_cdf(x_new, nu) - ph)) < 1e-14:
            x = x_new
            break
        x = x_new
    q = sign * x
    q = np.where(p_arr == 0.5, 0.0, q)
    return q if np.ndim(p) else float(q[0])


def ks_statistic_uniform(u: np.ndarray) -> float:
    """One-sample Kolmogorov-Smirnov distance of u against Uniform(0, 1)."""
    u = np.sort(np.asarray(u, dtype=float))
    n = u.size
    if n == 0:
        raise DomainError("empty sample")
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(max(np.max(grid_hi - u), np.max(u - grid_lo)))


def ks_pvalue(d: float, n: int) -> float:
    """Asymptotic Kolmogorov p-value for a one-sample statistic d at size n."""
    return float(special.kolmogorov(d * np.sqrt(n)))


def solve_penalized(x: np.ndarray, y: np.ndarray, penalty: np.ndarray,
                    weights: np.ndarray | None = None) -> np.ndarray:
    """Solve the penalized (weighted) least squares system.

    Minimizes ``||W^(1/2) (y - X b)||^2 + b' P b`` via the normal equations.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if weights is None:
        xtwx = x.T @ x
        xtwy = x.T @ y
    else:
        w = np.asarray(weights, dtype=float)
        xw = x * w[:, None]
        xtwx = x.T @ xw
        xtwy = xw.T @ y
    lhs = xtwx + penalty
    try:
        c, low = cho_factor(lhs)
        return cho_solve((c, low), xtwy)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - scipy raises LinAlgError
        raise SingularBasis(str(exc)) from exc
    except ValueError as exc:
        raise SingularBasis(str(exc)) from exc
