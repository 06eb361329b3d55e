"""Comparison statistics for zone metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np
from scipy.stats import rankdata

from .aggregation import ZoneMetrics
from .exceptions import InsufficientDataError, ValidationError

METRIC_NAMES = ("sgvi", "gvi_mean", "gvi_median", "ndvi")


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    median: float
    sd: float
    min: float
    max: float


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r_squared: float
    residuals: dict = field(default_factory=dict, repr=False)

    def predict(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=np.float64)


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError("x and y must be 1-D and of equal length")
    if len(x) < 3:
        raise InsufficientDataError(f"need at least 3 pairs, got {len(x)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValidationError("x and y must be finite")
    return x, y


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    da, db = a - a.mean(), b - b.mean()
    den = math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db)))
    if den == 0:
        return math.nan
    return max(-1.0, min(1.0, float(np.dot(da, db)) / den))


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks for ties.

    Returns NaN when either variable is constant.
    """
    x, y = _pair(x, y)
    return _pearson(rankdata(x), rankdata(y))


def spearman_pvalue(rho: float, n: int) -> float:
    """Two-sided p-value from the large-sample normal approximation.

    Approximate only: ``z = rho * sqrt(n - 1)``.
    """
    if math.isnan(rho) or n < 2:
        return math.nan
    z = abs(rho) * math.sqrt(n - 1)
    return math.erfc(z / math.sqrt(2.0))


def usable(metrics: Sequence[ZoneMetrics]) -> list[ZoneMetrics]:
    """Zones with a defined sGVI and NDVI, in the given order."""
    return [m for m in metrics if not m.excluded and m.ndvi_mean is not None
            and m.gvi_mean is not None and m.gvi_median is not None]


def metric_columns(metrics: Sequence[ZoneMetrics]) -> np.ndarray:
    """``(n, 4)`` array of sGVI, GVI mean, GVI median, NDVI."""
    return np.array([[m.sgvi, m.gvi_mean, m.gvi_median, m.ndvi_mean] for m in metrics],
                    dtype=np.float64).reshape(-1, 4)


def correlation_matrix(metrics: Sequence[ZoneMetrics]) -> np.ndarray:
    """4x4 Spearman matrix over :data:`METRIC_NAMES`.

    Excluded zones and zones without NDVI are dropped first.
    """
    rows = usable(metrics)
    if len(rows) < 3:
        raise InsufficientDataError(f"need at least 3 usable zones, got {len(rows)}")
    cols = metric_columns(rows)
    out = np.eye(4)
    for i in range(4):
        for j in range(i + 1, 4):
            out[i, j] = out[j, i] = spearman(cols[:, i], cols[:, j])
    return out


def ols_fit(x, y, ids: Sequence[Hashable] | None = None) -> RegressionFit:
    """Least-squares line ``y = intercept + slope * x``.

    ``r_squared`` is 0 when ``y`` is constant. Residuals are keyed by
    ``ids`` (default: position).
    """
    x, y = _pair(x, y)
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(np.dot(dx, dx))
    if sxx == 0 or sxx <= 1e-24 * max(1.0, float(np.dot(x, x))):
        raise ValidationError("degenerate regressor")
    slope = float(np.dot(dx, y - ym)) / sxx
    intercept = float(ym - slope * xm)
    res = y - (intercept + slope * x)
    ss_tot = float(np.dot(y - ym, y - ym))
    r2 = 0.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - float(np.dot(res, res)) / ss_tot))
    keys = list(ids) if ids is not None else list(range(len(x)))
    if len(keys) != len(x):
        raise ValidationError("ids must match the number of points")
    return RegressionFit(slope, intercept, r2, dict(zip(keys, res.tolist())))


def describe(values) -> DescriptiveStats:
    v = np.asarray(list(values), dtype=np.float64)
    if len(v) == 0:
        raise InsufficientDataError("no values to describe")
    sd = float(v.std(ddof=1)) if len(v) > 1 else 0.0
    return DescriptiveStats(len(v), float(v.mean()), float(np.median(v)), sd,
                            float(v.min()), float(v.max()))
