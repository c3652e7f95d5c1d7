"""Model quality metrics, AICc and leave-one-out component selection."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import pls
from .errors import DataError, NumericalError

__all__ = [
    "MetricsReport",
    "SelectionResult",
    "evaluate",
    "aicc",
    "loocv_predictions",
    "loocv_path",
    "select_components",
]

DEFAULT_P_RANGE = range(1, 16)


@dataclass(frozen=True)
class MetricsReport:
    rmse: float
    me: float
    r2: float
    n: int


@dataclass(frozen=True)
class SelectionResult:
    best_p: int
    aicc_by_p: dict
    rmse_by_p: dict
    loocv_predictions_best: np.ndarray
    skipped: dict = field(default_factory=dict)


def evaluate(predicted, actual) -> MetricsReport:
    """RMSE (with the 1/n convention), mean error and R^2 of ``predicted``."""
    yhat = np.asarray(predicted, dtype=float).ravel()
    y = np.asarray(actual, dtype=float).ravel()
    if yhat.size != y.size:
        raise DataError(f"length mismatch: {yhat.size} predictions for {y.size} values")
    if y.size < 1:
        raise DataError("no values to evaluate")
    resid = yhat - y
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0:
        raise DataError("R^2 is undefined: measured values have zero variance")
    return MetricsReport(
        rmse=math.sqrt(float(np.mean(resid**2))),
        me=float(np.mean(resid)),
        r2=1.0 - float(np.sum(resid**2)) / ss_tot,
        n=int(y.size),
    )


def aicc(n: int, p: int, rmse: float) -> float:
    """Corrected Akaike criterion ``n ln(RMSE^2) + 2p + 2p(p+1)/(n-p-1)``."""
    if n <= p + 1:
        raise DataError(f"AICc needs n > p + 1 (n={n}, p={p})")
    if not rmse > 0:
        raise DataError(f"AICc needs rmse > 0, got {rmse}")
    return n * math.log(rmse**2) + 2 * p + 2 * p * (p + 1) / (n - p - 1)


def loocv_path(X, y, max_p: int) -> np.ndarray:
    """Held-out predictions for every component count up to ``max_p``.

    Returns an ``n x max_p`` array; column ``p - 1`` holds the predictions of
    ``p``-component models, NaN where a fold could not support ``p``.
    Each fold is fitted once and its nested component prefixes reused.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    n = X.shape[0]
    if n < 3:
        raise DataError(f"LOOCV needs at least 3 samples, got {n}")
    out = np.full((n, max_p), np.nan)
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        keep[i] = False
        Xi, yi = X[keep], y[keep]
        keep[i] = True
        if np.ptp(yi) == 0:
            continue
        limit = min(max_p, Xi.shape[0] - 1, Xi.shape[1])
        x_mean, y_mean, W, P, q = pls.nipals(Xi, yi, limit)
        for p in range(1, W.shape[1] + 1):
            b = pls.coefficients(W[:, :p], P[:, :p], q[:p])
            out[i, p - 1] = y_mean + (X[i] - x_mean) @ b
    return out


def loocv_predictions(X, y, p: int) -> np.ndarray:
    """Prediction ``i`` comes from a ``p``-component model fitted without sample ``i``."""
    path = loocv_path(X, y, p)[:, p - 1]
    bad = np.flatnonzero(np.isnan(path))
    if bad.size:
        raise NumericalError(f"{p} components not attainable when holding out sample {int(bad[0])}")
    return path


def select_components(X, y, p_range=DEFAULT_P_RANGE) -> SelectionResult:
    """Pick the component count with the smallest LOOCV-based AICc.

    ``n`` in the criterion is the full calibration size (synthetic samples
    included). Infeasible counts are skipped with a warning; ties go to the
    smaller count.
    """
    p_values = sorted(set(int(p) for p in p_range))
    if not p_values or p_values[0] < 1:
        raise DataError(f"invalid component range {p_range!r}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    n = X.shape[0]
    path = loocv_path(X, y, p_values[-1])
    aicc_by_p, rmse_by_p, skipped = {}, {}, {}
    for p in p_values:
        preds = path[:, p - 1]
        if n <= p + 1:
            skipped[p] = f"too few samples (n={n})"
        elif np.isnan(preds).any():
            skipped[p] = f"not attainable in fold {int(np.flatnonzero(np.isnan(preds))[0])}"
        else:
            rmse = math.sqrt(float(np.mean((preds - y) ** 2)))
            if rmse == 0:
                skipped[p] = "zero cross-validation error"
            else:
                rmse_by_p[p] = rmse
                aicc_by_p[p] = aicc(n, p, rmse)
    for p, why in skipped.items():
        warnings.warn(f"skipping p={p}: {why}", stacklevel=2)
    if not aicc_by_p:
        raise NumericalError(f"no feasible component count in {p_values}")
    best = min(aicc_by_p, key=lambda p: (aicc_by_p[p], p))
    return SelectionResult(best, aicc_by_p, rmse_by_p, path[:, best - 1].copy(), skipped)
