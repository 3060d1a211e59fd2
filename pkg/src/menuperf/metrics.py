"""Goodness-of-fit and correlation metrics."""

from __future__ import annotations

import numpy as np

__all__ = ["MetricError", "r_squared", "mse", "pearson"]


class MetricError(ValueError):
    pass


def _pair(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape or a.ndim != 1 or a.size == 0:
        raise MetricError("inputs must be equal-length nonempty 1D sequences")
    return a, p


def r_squared(actual, predicted) -> float:
    """Coefficient of determination, 1 - SS_res / SS_tot."""
    a, p = _pair(actual, predicted)
    ss_tot = float(np.sum((a - a.mean()) ** 2))
    if ss_tot == 0.0:
        raise MetricError("r_squared undefined: actual values have zero variance")
    return 1.0 - float(np.sum((a - p) ** 2)) / ss_tot


def mse(actual, predicted) -> float:
    a, p = _pair(actual, predicted)
    return float(np.mean((a - p) ** 2))


def pearson(x, y) -> float:
    """Sample correlation coefficient."""
    a, b = _pair(x, y)
    if a.size < 3:
        raise MetricError("pearson needs at least 3 points")
    da = a - a.mean()
    db = b - b.mean()
    denom = float(np.sqrt(np.sum(da**2) * np.sum(db**2)))
    if denom == 0.0:
        raise MetricError("pearson undefined: an input has zero variance")
    return float(np.sum(da * db) / denom)
