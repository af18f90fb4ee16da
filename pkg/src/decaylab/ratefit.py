"""Asymptotic fits on sampled time series: power laws, ``√log t`` growth, and
a boundedness verdict."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

MIN_SAMPLES = 10


@dataclass
class RateFit:
    window: tuple[float, float]
    model: str  # "power" | "sqrtlog" | "bounded"
    exponent: float
    prefactor: float
    r_squared: float
    slope_se: float
    n_samples: int
    sup: float = math.nan
    sup_t: float = math.nan
    goodness_ratio: float = math.nan
    verdict: str = ""

    def as_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Slope, intercept, r², slope standard error."""
    n = len(x)
    xm, ym = float(np.sum(x)) / n, float(np.sum(y)) / n
    dx, dy = x - xm, y - ym
    sxx = float(np.sum(dx * dx))
    if sxx == 0.0:
        raise ValueError("fit window has no spread in t")
    slope = float(np.sum(dx * dy)) / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    sse = float(np.sum(resid * resid))
    sst = float(np.sum(dy * dy))
    # a constant series is fitted perfectly by a zero slope
    r2 = 1.0 if sst == 0.0 or sse <= 1e-28 * max(sst, 1.0) else max(0.0, 1.0 - sse / sst)
    se = math.sqrt(sse / (n - 2) / sxx) if n > 2 else math.inf
    return slope, intercept, min(r2, 1.0), se


def _window(t, y, window):
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape:
        raise ValueError("t and y differ in length")
    t0, t1 = window
    if t0 < 1:
        raise ValueError(f"fit window must start at t >= 1, got {t0}")
    if t1 <= t0:
        raise ValueError("empty fit window")
    sel = (t >= t0) & (t <= t1)
    if np.count_nonzero(sel) < MIN_SAMPLES:
        raise ValueError(
            f"window [{t0}, {t1}] holds {np.count_nonzero(sel)} samples, need {MIN_SAMPLES}"
        )
    return t[sel], y[sel]


def fit_power(t, y, window: tuple[float, float]) -> RateFit:
    """Least squares of ``log y`` on ``log t``: ``y ≈ prefactor · t^exponent``."""
    tw, yw = _window(t, y, window)
    if np.any(yw <= 0) or not np.all(np.isfinite(yw)):
        raise ValueError("power fit needs positive finite values in the window")
    slope, icpt, r2, se = _ols(np.log(tw), np.log(yw))
    return RateFit(
        window=(float(window[0]), float(window[1])),
        model="power",
        exponent=slope,
        prefactor=math.exp(icpt),
        r_squared=r2,
        slope_se=se,
        n_samples=len(tw),
    )


def fit_sqrtlog(t, y, window: tuple[float, float]) -> RateFit:
    """Least squares of ``y²`` on ``log t``; ``exponent`` holds the slope.

    ``goodness_ratio = max(y²/log t) / min(y²/log t)`` over the window.
    """
    tw, yw = _window(t, y, window)
    if np.any(yw <= 0) or not np.all(np.isfinite(yw)):
        raise ValueError("sqrt-log fit needs positive finite values in the window")
    lt = np.log(tw)
    y2 = yw * yw
    slope, icpt, r2, se = _ols(lt, y2)
    sel = lt > 0
    ratio = y2[sel] / lt[sel]
    return RateFit(
        window=(float(window[0]), float(window[1])),
        model="sqrtlog",
        exponent=slope,
        prefactor=math.sqrt(slope) if slope > 0 else 0.0,
        r_squared=r2,
        slope_se=se,
        n_samples=len(tw),
        goodness_ratio=float(ratio.max() / ratio.min()) if len(ratio) else math.nan,
    )


def boundedness_score(
    t,
    y,
    window: tuple[float, float],
    data_scale: float,
    ratio_cap: float = 10.0,
    beta_tol: float = 0.05,
) -> RateFit:
    """Bounded iff the power exponent is at most ``beta_tol`` and
    ``sup y <= ratio_cap * data_scale`` on the window.

    Decay (negative exponent) counts as bounded.  ``sup`` is divided by
    ``data_scale`` in ``goodness_ratio`` so the measured constant is reported.
    """
    fit = fit_power(t, y, window)
    tw, yw = _window(t, y, window)
    i = int(np.argmax(yw))
    sup = float(yw[i])
    ok = fit.exponent <= beta_tol and (
        data_scale > 0 and math.isfinite(data_scale) and sup <= ratio_cap * data_scale
    )
    fit.model = "bounded"
    fit.sup = sup
    fit.sup_t = float(tw[i])
    fit.goodness_ratio = sup / data_scale if data_scale > 0 else math.inf
    fit.verdict = "bounded" if ok else "unbounded"
    return fit
