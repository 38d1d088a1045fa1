"""LOESS: locally weighted linear regression with pointwise confidence bands.

Degree-1 local fits with tricube neighborhood weights. The confidence
band uses the linear-smoother variance: each fitted value is l'y for a
weight vector l, so se = sigma * ||l||, with sigma estimated from the
residuals at the sample points and a t quantile at the residual degrees
of freedom. Series here have few points (11 years), so no robustness
iterations are applied.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmoothConfig:
    span: float = 0.75
    degree: int = 1  # only local-linear is supported
    ci_level: float = 0.95

    def __post_init__(self):
        if not 0 < self.span <= 1:
            raise ValueError(f"span must be in (0, 1], got {self.span}")
        if self.degree != 1:
            raise ValueError("only degree=1 local fits are supported")
        if not 0 < self.ci_level < 1:
            raise ValueError(f"ci_level must be in (0, 1), got {self.ci_level}")


@dataclass
class SmoothedSeries:
    x: np.ndarray
    fitted: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


def _smoother_vector(
    x: np.ndarray, x0: float, window: int
) -> np.ndarray:
    """Weight vector l with fitted(x0) = l . y, tricube-weighted local line."""
    n = len(x)
    dist = np.abs(x - x0)
    order = np.argsort(dist, kind="stable")[:window]
    d_max = dist[order[-1]]
    l = np.zeros(n)
    if d_max == 0.0:
        # Degenerate window (all x equal): weighted mean of the window.
        log.warning("degenerate local window at x0=%s; using plain mean", x0)
        l[order] = 1.0 / window
        return l
    w = (1.0 - (dist[order] / d_max) ** 3) ** 3
    w = np.clip(w, 0.0, None)
    xw = x[order]
    sw = w.sum()
    sx = (w * xw).sum()
    sxx = (w * xw * xw).sum()
    # Local design centered at x0: fitted value is the intercept.
    mx = sx / sw
    var = sxx / sw - mx * mx
    if var <= 0.0:
        l[order] = w / sw
        return l
    l[order] = w / sw * (1.0 + (x0 - mx) * (xw - mx) / var)
    return l


def loess_fit(
    points: list[tuple[float, float]],
    config: SmoothConfig = SmoothConfig(),
    eval_x: np.ndarray | None = None,
) -> SmoothedSeries:
    """Fit a LOESS curve and pointwise confidence band.

    `points` are (x, y) pairs with distinct x values, at least 3 of
    them. By default the curve is evaluated at the sample points; pass
    `eval_x` for a denser plotting grid.
    """
    if len(points) < 3:
        raise ValueError(f"need at least 3 points, got {len(points)}")
    pts = sorted(points)
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    if len(np.unique(x)) != len(x):
        raise ValueError("x values must be distinct")
    n = len(x)
    window = min(n, max(3, math.ceil(config.span * n)))

    # Hat-like matrix at the sample points, for the residual variance.
    L = np.vstack([_smoother_vector(x, xi, window) for xi in x])
    fitted_at_samples = L @ y
    residuals = y - fitted_at_samples
    df = n - np.trace(L)
    df = max(df, 1.0)
    sigma2 = float(residuals @ residuals) / df
    t_quantile = stats.t.ppf(0.5 + config.ci_level / 2.0, df)

    grid = x if eval_x is None else np.asarray(eval_x, dtype=float)
    fitted = np.empty(len(grid))
    half_width = np.empty(len(grid))
    for i, x0 in enumerate(grid):
        l = _smoother_vector(x, float(x0), window)
        fitted[i] = l @ y
        half_width[i] = t_quantile * math.sqrt(sigma2 * float(l @ l))
    return SmoothedSeries(
        x=grid,
        fitted=fitted,
        lower=fitted - half_width,
        upper=fitted + half_width,
    )


def densify_grid(x: np.ndarray, factor: int = 10) -> np.ndarray:
    """Evenly spaced evaluation grid through the observed x range."""
    x = np.asarray(x, dtype=float)
    return np.linspace(x.min(), x.max(), (len(x) - 1) * factor + 1)
