"""Seasonal random walk and SARIMA estimation, selection, and simulation.

SARIMA models are fit by exact Gaussian maximum likelihood: the differenced
series runs through a Kalman filter in the Harvey state-space form with the
innovation variance concentrated out. Stationarity and invertibility are
enforced structurally by optimizing over partial-autocorrelation transforms
of each polynomial, so the optimizer never leaves the admissible region. A
conditional-sum-of-squares pass provides the warm start.

Automatic order selection is a stepwise AICc search: seasonal differencing is
chosen by a seasonal-strength heuristic, regular differencing by variance
reduction, then neighbors of a small start set are explored until no move
improves AICc.

Forecasting runs the conditional-mean recursion of the full (integrated)
lag polynomial with future innovations set to zero; forecast variances come
from the psi-weight expansion. Simulation applies the identical recursion to
externally supplied innovation paths, so a zero-innovation path reproduces
the mean forecast exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, signal

from .errors import DomainError, LengthMismatch, NonInvertible, SeriesTooShort
from .rng import SeededStream

__all__ = [
    "SarimaOrders",
    "SarimaModel",
    "SeasonalRandomWalk",
    "fit_srw",
    "fit_sarima",
    "auto_select_orders",
    "forecast",
    "simulate",
    "fitted_values",
    "difference",
    "integrate",
    "seasonal_strength",
]

MAX_P, MAX_Q = 3, 3
MAX_SP, MAX_SQ = 2, 2
MAX_D, MAX_SD = 1, 1

_PACF_CAP = 1.0 - 1e-6


@dataclass(frozen=True)
class SarimaOrders:
    p: int
    d: int
    q: int
    P: int = 0
    D: int = 0
    Q: int = 0
    s: int = 12

    def __post_init__(self):
        if min(self.p, self.d, self.q, self.P, self.D, self.Q) < 0:
            raise DomainError("orders must be non-negative")
        if self.p > MAX_P or self.q > MAX_Q:
            raise DomainError(f"p, q bounded by {MAX_P}; got ({self.p}, {self.q})")
        if self.P > MAX_SP or self.Q > MAX_SQ:
            raise DomainError(f"P, Q bounded by {MAX_SP}; got ({self.P}, {self.Q})")
        if self.d > MAX_D or self.D > MAX_SD:
            raise DomainError(f"d, D bounded by {MAX_D}")
        if self.s < 1:
            raise DomainError("seasonal period must be >= 1")

    @property
    def n_coef(self) -> int:
        return self.p + self.q + self.P + self.Q

    def label(self) -> str:
        return (f"({self.p},{self.d},{self.q})"
                f"({self.P},{self.D},{self.Q})_{self.s}")


@dataclass
class SarimaModel:
    orders: SarimaOrders
    ar: np.ndarray
    ma: np.ndarray
    sar: np.ndarray
    sma: np.ndarray
    drift: float | None
    sigma2: float
    residuals: np.ndarray       # innovations of the differenced series
    loglik: float
    aicc: float
    series: np.ndarray = field(repr=False)

    @property
    def n_head(self) -> int:
        """Observations lost to differencing."""
        return self.orders.d + self.orders.s * self.orders.D


@dataclass
class SeasonalRandomWalk:
    drift: float
    sigma2: float
    series: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    s: int = 12


# --- polynomial helpers ------------------------------------------------------

def _lag_poly(coeffs: np.ndarray, s: int, sign: float) -> np.ndarray:
    """(1 + sign * sum_i c_i B^{i*s}) as ascending coefficients."""
    out = np.zeros(len(coeffs) * s + 1)
    out[0] = 1.0
    for i, c in enumerate(coeffs, start=1):
        out[i * s] = sign * c
    return out


def _diff_poly(d: int, D: int, s: int) -> np.ndarray:
    poly = np.array([1.0])
    for _ in range(d):
        poly = np.convolve(poly, [1.0, -1.0])
    for _ in range(D):
        seasonal = np.zeros(s + 1)
        seasonal[0], seasonal[s] = 1.0, -1.0
        poly = np.convolve(poly, seasonal)
    return poly


def _full_ar(model_ar, model_sar, s):
    return np.convolve(_lag_poly(model_ar, 1, -1.0), _lag_poly(model_sar, s, -1.0))


def _full_ma(model_ma, model_sma, s):
    return np.convolve(_lag_poly(model_ma, 1, +1.0), _lag_poly(model_sma, s, +1.0))


def difference(series: np.ndarray, d: int, D: int, s: int) -> np.ndarray:
    w = np.asarray(series, dtype=float)
    for _ in range(D):
        w = w[s:] - w[:-s]
    for _ in range(d):
        w = w[1:] - w[:-1]
    return w


def integrate(diffed: np.ndarray, head: np.ndarray, d: int, D: int, s: int) -> np.ndarray:
    """Invert ``difference``; ``head`` holds the first d + s*D original values."""
    head = np.asarray(head, dtype=float)
    if len(head) != d + s * D:
        raise LengthMismatch(f"head must have length {d + s * D}")
    out = np.asarray(diffed, dtype=float)
    for k in range(d):
        seed = difference(head, d - 1 - k, D, s)
        y = np.empty(len(out) + 1)
        y[0] = seed[0]
        y[1:] = seed[0] + np.cumsum(out)
        out = y
    for k in range(D):
        seed = difference(head, 0, D - 1 - k, s)
        y = np.empty(len(out) + s)
        y[:s] = seed[:s]
        for t in range(s, len(y)):
            y[t] = y[t - s] + out[t - s]
        out = y
    return out


# --- admissible-region parameterization --------------------------------------

def _pacf_to_coef(z: np.ndarray) -> np.ndarray:
    """Map unconstrained reals to stationary AR coefficients (Monahan)."""
    pac = np.clip(np.tanh(np.asarray(z, dtype=float)), -_PACF_CAP, _PACF_CAP)
    coef = np.zeros(0)
    for k in range(len(pac)):
        r = pac[k]
        new = np.empty(k + 1)
        new[:k] = coef - r * coef[::-1]
        new[k] = r
        coef = new
    return coef


def _unpack(theta: np.ndarray, orders: SarimaOrders, include_drift: bool):
    p, q, P, Q = orders.p, orders.q, orders.P, orders.Q
    i = 0
    ar = _pacf_to_coef(theta[i:i + p]); i += p
    ma = -_pacf_to_coef(theta[i:i + q]); i += q
    sar = _pacf_to_coef(theta[i:i + P]); i += P
    sma = -_pacf_to_coef(theta[i:i + Q]); i += Q
    drift = float(theta[i]) if include_drift else 0.0
    return ar, ma, sar, sma, drift


# --- likelihood ---------------------------------------------------------------

def _stationary_cov(tmat: np.ndarray, rrt: np.ndarray) -> np.ndarray | None:
    """Solve P = T P T' + RR' by doubling; None if it fails to converge."""
    a = tmat.copy()
    g = rrt.copy()
    for _ in range(60):
        ag = a @ g @ a.T
        g = g + ag
        if not np.all(np.isfinite(g)):
            return None
        if np.max(np.abs(ag)) < 1e-14 * (1.0 + np.max(np.abs(g))):
            return g
        a = a @ a
    return None


def _kalman(w: np.ndarray, ar_full: np.ndarray, ma_full: np.ndarray):
    """Concentrated Gaussian likelihood of a zero-mean ARMA on w.

    Exact Kalman recursion until the error covariance reaches its steady
    state, after which the innovations come from the equivalent ARMA filter.
    Returns (loglik, sigma2, innovations); (-inf, nan, None) on numerical
    failure. ``ar_full`` / ``ma_full`` carry phi_1.. and theta_1.. of the
    expanded polynomials.
    """
    n = len(w)
    p, q = len(ar_full), len(ma_full)
    if p == 0 and q == 0:
        v = w.copy()
        sigma2 = float(np.mean(v * v))
        ll = -0.5 * n * (math.log(2.0 * math.pi) + 1.0
                         + math.log(max(sigma2, 1e-300)))
        return ll, sigma2, v

    r = max(p, q + 1)
    avec = np.zeros(r)
    avec[:p] = ar_full
    rvec = np.zeros(r)
    rvec[0] = 1.0
    rvec[1:q + 1] = ma_full
    tmat = np.zeros((r, r))
    tmat[:, 0] = avec
    tmat[np.arange(r - 1), np.arange(1, r)] = 1.0
    rrt = np.outer(rvec, rvec)

    pmat = _stationary_cov(tmat, rrt)
    if pmat is None or not np.all(np.isfinite(pmat)):
        return -np.inf, np.nan, None

    apoly = np.concatenate([[1.0], -ar_full])
    bpoly = np.concatenate([[1.0], ma_full])
    handoff = max(p, q)

    state = np.zeros(r)
    shifted = np.zeros(r)
    v = np.empty(n)
    logf_sum = 0.0
    ssq = 0.0
    steady_at = n
    kvec = np.zeros(r)
    fcur = 0.0
    for t in range(n):
        fcur_new = pmat[0, 0]
        if not (fcur_new > 0.0) or not np.isfinite(fcur_new):
            return -np.inf, np.nan, None
        fcur = fcur_new
        # T @ P[:, 0] via the companion structure
        kvec = avec * pmat[0, 0]
        kvec[:-1] += pmat[1:, 0]
        kvec /= fcur
        vt = w[t] - state[0]
        v[t] = vt
        logf_sum += math.log(fcur)
        ssq += vt * vt / fcur
        shifted[:-1] = state[1:]
        shifted[-1] = 0.0
        state = avec * state[0] + shifted + kvec * vt
        # T P T' with T companion: row then column structure, O(r^2)
        tp = np.outer(avec, pmat[0])
        tp[:-1] += pmat[1:]
        pnew = np.outer(tp[:, 0], avec)
        pnew[:, :-1] += tp[:, 1:]
        pnew -= np.outer(kvec, kvec) * fcur
        pnew += rrt
        if (t + 1 > handoff
                and np.max(np.abs(pnew - pmat)) < 1e-11 * (1.0 + abs(fcur))):
            steady_at = t + 1
            pmat = pnew
            break
        pmat = pnew

    if steady_at < n:
        # steady-state innovations: eps_t = w_t - sum a_i w_(t-i) - sum b_j eps_(t-j)
        zi = signal.lfiltic(apoly, bpoly,
                            y=v[steady_at - 1::-1][:q],
                            x=w[steady_at - 1::-1][:p])
        tail, _ = signal.lfilter(apoly, bpoly, w[steady_at:], zi=zi)
        v[steady_at:] = tail
        m = n - steady_at
        logf_sum += m * math.log(fcur)
        ssq += float(np.sum(tail * tail)) / fcur

    sigma2 = ssq / n
    ll = (-0.5 * n * (math.log(2.0 * math.pi) + 1.0
                      + math.log(max(sigma2, 1e-300)))
          - 0.5 * logf_sum)
    return ll, float(sigma2), v


def _css_sse(w: np.ndarray, ar_full: np.ndarray, ma_full: np.ndarray) -> float:
    """Conditional sum of squares (zero presample); optimizer warm starts only."""
    n = len(w)
    p, q = len(ar_full), len(ma_full)
    if p >= n:
        return float(np.sum(w * w))
    apoly = np.concatenate([[1.0], -ar_full])
    bpoly = np.concatenate([[1.0], ma_full])
    e = signal.lfilter(apoly, bpoly, w)
    if not np.all(np.isfinite(e)):
        return float(np.sum(w * w)) * 1e6
    tail = e[p:]
    return float(np.sum(tail * tail))


def _check_roots(coeffs: np.ndarray, sign: float, what: str) -> None:
    if len(coeffs) == 0:
        return
    poly = np.concatenate([[1.0], sign * np.asarray(coeffs)])
    roots = np.roots(poly[::-1])
    if len(roots) and np.min(np.abs(roots)) <= 1.0:
        raise NonInvertible(f"{what} polynomial has a root inside the unit circle")


def fit_sarima(series, orders: SarimaOrders, include_drift: bool = False) -> SarimaModel:
    """Exact maximum-likelihood SARIMA fit with enforced admissibility."""
    y = np.asarray(series, dtype=float)
    s = orders.s
    n_head = orders.d + s * orders.D
    w = difference(y, orders.d, orders.D, s)
    n_w = len(w)
    min_len = max(orders.p + s * orders.P, orders.q + s * orders.Q + 1, 1)
    if n_w < min_len + max(8, orders.n_coef + 2):
        raise SeriesTooShort(
            f"need at least {n_head + min_len + max(8, orders.n_coef + 2)} "
            f"observations for orders {orders.label()}, got {len(y)}")

    n_par = orders.n_coef + (1 if include_drift else 0)

    def build(theta):
        ar, ma, sar, sma, drift = _unpack(theta, orders, include_drift)
        ar_full = -_full_ar(ar, sar, s)[1:]
        ma_full = _full_ma(ma, sma, s)[1:]
        return ar, ma, sar, sma, drift, ar_full, ma_full

    def neg_loglik(theta):
        _, _, _, _, drift, ar_full, ma_full = build(theta)
        ll, _, _ = _kalman(w - drift, ar_full, ma_full)
        return -ll if np.isfinite(ll) else 1e12

    def css_obj(theta):
        _, _, _, _, drift, ar_full, ma_full = build(theta)
        sse = _css_sse(w - drift, ar_full, ma_full)
        return math.log(max(sse, 1e-300))

    if n_par == 0:
        theta_hat = np.zeros(0)
    else:
        theta0 = np.zeros(n_par)
        if include_drift:
            theta0[-1] = float(np.mean(w))
        warm = optimize.minimize(css_obj, theta0, method="BFGS",
                                 options={"maxiter": 200, "gtol": 1e-6})
        best = optimize.minimize(neg_loglik, warm.x, method="BFGS",
                                 options={"maxiter": 80, "gtol": 1e-5})
        if not np.isfinite(best.fun) or best.fun > neg_loglik(theta0):
            retry = optimize.minimize(neg_loglik, theta0, method="BFGS",
                                      options={"maxiter": 80, "gtol": 1e-5})
            if retry.fun < best.fun:
                best = retry
        theta_hat = best.x

    ar, ma, sar, sma, drift, ar_full, ma_full = build(theta_hat)
    ll, sigma2, resid = _kalman(w - drift, ar_full, ma_full)
    if resid is None:
        raise NonInvertible("likelihood evaluation failed at the optimum")
    _check_roots(ar, -1.0, "autoregressive")
    _check_roots(sar, -1.0, "seasonal autoregressive")
    _check_roots(-ma, -1.0, "moving-average")
    _check_roots(-sma, -1.0, "seasonal moving-average")

    k = n_par + 1  # + innovation variance
    aic = -2.0 * ll + 2.0 * k
    denom = n_w - k - 1
    aicc = aic + (2.0 * k * (k + 1) / denom) if denom > 0 else np.inf

    return SarimaModel(orders=orders, ar=ar, ma=ma, sar=sar, sma=sma,
                       drift=drift if include_drift else None,
                       sigma2=sigma2, residuals=resid, loglik=ll, aicc=aicc,
                       series=y.copy())


def fit_srw(series, s: int = 12) -> SeasonalRandomWalk:
    """Seasonal random walk with drift: the mean seasonal difference."""
    y = np.asarray(series, dtype=float)
    if len(y) < 2 * s:
        raise SeriesTooShort(f"need at least {2 * s} observations, got {len(y)}")
    diffs = y[s:] - y[:-s]
    drift = float(np.mean(diffs))
    resid = diffs - drift
    sigma2 = float(np.mean(resid * resid))
    return SeasonalRandomWalk(drift=drift, sigma2=sigma2, series=y.copy(),
                              residuals=resid, s=s)


# --- automatic order selection ------------------------------------------------

def seasonal_strength(series, s: int = 12) -> float:
    """Share of detrended variance explained by a slowly-evolving seasonal.

    Decomposition: centered moving-average trend, per-phase rolling-mean
    seasonal, remainder. Returns max(0, 1 - var(remainder)/var(detrended)).
    """
    y = np.asarray(series, dtype=float)
    n = len(y)
    if n < 3 * s:
        raise SeriesTooShort(f"need at least {3 * s} observations, got {n}")
    weights = np.ones(s + 1) / s
    weights[0] = weights[-1] = 0.5 / s
    trend = np.convolve(y, weights, mode="valid")
    half = (s + 1) // 2
    detrended = y[half:half + len(trend)] - trend

    seasonal = np.empty_like(detrended)
    window = 3
    for phase in range(s):
        sub = detrended[phase::s]
        m = len(sub)
        smooth = np.empty(m)
        for i in range(m):
            lo, hi = max(0, i - window), min(m, i + window + 1)
            smooth[i] = np.mean(sub[lo:hi])
        seasonal[phase::s] = smooth
    remainder = detrended - seasonal
    var_d = float(np.var(detrended))
    if var_d <= 0.0:
        return 0.0
    return max(0.0, 1.0 - float(np.var(remainder)) / var_d)


def _candidate_orders(p, d, q, P, D, Q, s):
    try:
        return SarimaOrders(p, d, q, P, D, Q, s)
    except DomainError:
        return None


def _min_root_modulus(model: SarimaModel) -> float:
    worst = np.inf
    for coeffs, sign in ((model.ar, -1.0), (model.sar, -1.0),
                         (model.ma, 1.0), (model.sma, 1.0)):
        if len(coeffs) == 0:
            continue
        poly = np.concatenate([[1.0], sign * np.asarray(coeffs)])
        roots = np.roots(poly[::-1])
        if len(roots):
            worst = min(worst, float(np.min(np.abs(roots))))
    return worst


def auto_select_orders(series, s: int = 12, stepwise: bool = True,
                       seasonal_threshold: float = 0.64) -> SarimaModel:
    """Simplified stepwise AICc search over the bounded order space."""
    y = np.asarray(series, dtype=float)
    if len(y) < 3 * s:
        raise SeriesTooShort(f"need at least {3 * s} observations, got {len(y)}")

    scale = float(np.max(np.abs(y))) if len(y) else 0.0
    if np.ptp(y) <= 1e-12 * max(1.0, scale):
        orders = SarimaOrders(0, 0, 0, 0, 0, 0, s)
        return SarimaModel(orders=orders, ar=np.zeros(0), ma=np.zeros(0),
                           sar=np.zeros(0), sma=np.zeros(0),
                           drift=float(np.mean(y)), sigma2=0.0,
                           residuals=np.zeros(len(y)), loglik=np.inf,
                           aicc=-np.inf, series=y.copy())

    D = 1 if seasonal_strength(y, s) >= seasonal_threshold else 0
    w = difference(y, 0, D, s)
    d = 1 if np.var(difference(w, 1, 0, s)) < np.var(w) else 0

    cache: dict[tuple, SarimaModel | None] = {}

    def evaluate(p, q, P, Q, drift):
        key = (p, q, P, Q, drift)
        if key in cache:
            return cache[key]
        orders = _candidate_orders(p, d, q, P, D, Q, s)
        model = None
        if orders is not None:
            try:
                model = fit_sarima(y, orders, include_drift=drift)
            except (SeriesTooShort, NonInvertible):
                model = None
        # reject near-unit-root fits: almost-cancelling factors inflate
        # the likelihood without adding structure
        if model is not None and _min_root_modulus(model) < 1.001:
            model = None
        cache[key] = model
        return model

    drift_allowed = (d + D) <= 1
    starts = [(2, 2, 1, 1), (0, 0, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1)]
    if s <= 1 or len(y) < 3 * s + 12:
        starts = [(2, 2, 0, 0), (0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0)]

    best = None
    for (p, q, P, Q) in starts:
        for drift in ({True, False} if drift_allowed else {False}):
            m = evaluate(p, q, P, Q, drift)
            if m is not None and (best is None or m.aicc < best.aicc):
                best = m
    if best is None:
        raise NonInvertible("no admissible model could be fitted")

    if not stepwise:
        for p in range(MAX_P + 1):
            for q in range(MAX_Q + 1):
                for P in range(MAX_SP + 1):
                    for Q in range(MAX_SQ + 1):
                        for drift in ({True, False} if drift_allowed else {False}):
                            m = evaluate(p, q, P, Q, drift)
                            if m is not None and m.aicc < best.aicc - 1e-10:
                                best = m
        return best

    improved = True
    while improved:
        improved = False
        o = best.orders
        drift = best.drift is not None
        moves = [(o.p + 1, o.q, o.P, o.Q), (o.p - 1, o.q, o.P, o.Q),
                 (o.p, o.q + 1, o.P, o.Q), (o.p, o.q - 1, o.P, o.Q),
                 (o.p, o.q, o.P + 1, o.Q), (o.p, o.q, o.P - 1, o.Q),
                 (o.p, o.q, o.P, o.Q + 1), (o.p, o.q, o.P, o.Q - 1),
                 (o.p + 1, o.q + 1, o.P, o.Q), (o.p - 1, o.q - 1, o.P, o.Q)]
        candidates = [(p, q, P, Q, drift) for (p, q, P, Q) in moves
                      if p >= 0 and q >= 0 and P >= 0 and Q >= 0]
        if drift_allowed:
            candidates.append((o.p, o.q, o.P, o.Q, not drift))
        for (p, q, P, Q, dr) in candidates:
            m = evaluate(p, q, P, Q, dr)
            if m is not None and m.aicc < best.aicc - 1e-10:
                best = m
                improved = True
                break
    return best


# --- forecasting and simulation -----------------------------------------------

def _recursion_terms(model: SarimaModel):
    o = model.orders
    ar_poly = _full_ar(model.ar, model.sar, o.s)
    full_poly = np.convolve(ar_poly, _diff_poly(o.d, o.D, o.s))
    arec = -full_poly[1:]
    bpoly = _full_ma(model.ma, model.sma, o.s)
    drift = model.drift if model.drift is not None else 0.0
    const = drift * float(np.sum(ar_poly))  # a(1) = phi(1) * PHI(1)
    return arec, bpoly, const


def forecast(model, horizon: int) -> tuple[np.ndarray, np.ndarray]:
    """Conditional-mean forecasts and forecast variances for 1..horizon."""
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    if isinstance(model, SeasonalRandomWalk):
        s, n = model.s, len(model.series)
        mean = np.empty(horizon)
        var = np.empty(horizon)
        ext = np.concatenate([model.series, np.zeros(horizon)])
        for h in range(1, horizon + 1):
            k = math.ceil(h / s)
            mean[h - 1] = model.series[n - 1 + h - s * k] + k * model.drift
            var[h - 1] = k * model.sigma2
        return mean, var

    arec, bpoly, const = _recursion_terms(model)
    la, lb = len(arec), len(bpoly) - 1
    n = len(model.series)
    y_ext = np.concatenate([model.series, np.zeros(horizon)])
    eps_hist = np.zeros(n)
    eps_hist[model.n_head:] = model.residuals
    for h in range(1, horizon + 1):
        tpos = n + h - 1
        val = const
        imax = min(la, tpos)
        if imax > 0:
            val += arec[:imax] @ y_ext[tpos - imax:tpos][::-1]
        for j in range(h, lb + 1):
            val += bpoly[j] * eps_hist[tpos - j]
        y_ext[tpos] = val

    psi = np.zeros(horizon)
    psi[0] = 1.0
    for k in range(1, horizon):
        acc = bpoly[k] if k <= lb else 0.0
        for i in range(1, min(la, k) + 1):
            acc += arec[i - 1] * psi[k - i]
        psi[k] = acc
    var = model.sigma2 * np.cumsum(psi * psi)
    return y_ext[n:], var


def simulate(model, horizon: int, innovations: np.ndarray | None = None,
             n_paths: int = 1, stream: SeededStream | None = None) -> np.ndarray:
    """Sample paths satisfying the fitted recursion for given innovations.

    ``innovations`` has shape (n_paths, horizon); if omitted, innovations are
    drawn N(0, sigma2) from ``stream``. All-zero innovations reproduce the
    mean forecast.
    """
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    if innovations is None:
        gen = (stream or SeededStream(0)).generator()
        sigma = math.sqrt(model.sigma2)
        innovations = gen.normal(0.0, sigma, size=(n_paths, horizon))
    else:
        innovations = np.atleast_2d(np.asarray(innovations, dtype=float))
        if innovations.shape[1] != horizon:
            raise LengthMismatch(
                f"innovations cover {innovations.shape[1]} months, horizon is {horizon}")
    npaths = innovations.shape[0]

    if isinstance(model, SeasonalRandomWalk):
        s, n = model.s, len(model.series)
        ext = np.tile(model.series, (npaths, 1))
        ext = np.concatenate([ext, np.zeros((npaths, horizon))], axis=1)
        for h in range(1, horizon + 1):
            tpos = n + h - 1
            ext[:, tpos] = ext[:, tpos - s] + model.drift + innovations[:, h - 1]
        return ext[:, n:]

    arec, bpoly, const = _recursion_terms(model)
    la, lb = len(arec), len(bpoly) - 1
    n = len(model.series)
    y_ext = np.tile(model.series, (npaths, 1))
    y_ext = np.concatenate([y_ext, np.zeros((npaths, horizon))], axis=1)
    eps_hist = np.zeros(n)
    eps_hist[model.n_head:] = model.residuals
    eps_ext = np.tile(eps_hist, (npaths, 1))
    eps_ext = np.concatenate([eps_ext, innovations], axis=1)
    for h in range(1, horizon + 1):
        tpos = n + h - 1
        val = np.full(npaths, const)
        imax = min(la, tpos)
        if imax > 0:
            val += y_ext[:, tpos - imax:tpos][:, ::-1] @ arec[:imax]
        jmax = min(lb, tpos)
        val += eps_ext[:, tpos] + (eps_ext[:, tpos - jmax:tpos][:, ::-1] @ bpoly[1:jmax + 1]
                                   if jmax > 0 else 0.0)
        y_ext[:, tpos] = val
    return y_ext[:, n:]


def fitted_values(model) -> np.ndarray:
    """In-sample one-step fitted series; differencing head is passthrough."""
    if isinstance(model, SeasonalRandomWalk):
        fitted = model.series.copy()
        fitted[model.s:] = model.series[:-model.s] + model.drift
        return fitted
    fitted = model.series.copy()
    fitted[model.n_head:] -= model.residuals
    return fitted
