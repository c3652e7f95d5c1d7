"""Single-response partial least squares (NIPALS PLS1).

X and y are mean-centred (no scaling). Each component takes the weight
vector along the current X-residual / y-residual covariance, so the fit is
deterministic and needs no inner iteration.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, DegenerateFitError

__all__ = ["PlsModel", "fit", "predict", "save_model", "load_model", "nipals"]

# relative size below which a residual counts as exhausted
_RANK_TOL = 1e-10


@dataclass(frozen=True)
class PlsModel:
    x_mean: np.ndarray
    y_mean: float
    weights: np.ndarray  # m x p
    x_loadings: np.ndarray  # m x p
    y_loadings: np.ndarray  # p
    regression_coefficients: np.ndarray  # m
    wavelengths: np.ndarray | None = None

    @property
    def n_components(self) -> int:
        return self.weights.shape[1]

    @property
    def n_features(self) -> int:
        return self.x_mean.size


def _as_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2:
        raise DataError(f"X must be 2-d, got shape {X.shape}")
    if X.shape[0] != y.size:
        raise DataError(f"X has {X.shape[0]} rows but y has {y.size} values")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DataError("X and y must be finite")
    return X, y


def nipals(X, y, max_components: int):
    """Run NIPALS for up to ``max_components`` components.

    Stops early when the residual is exhausted. Returns
    ``(x_mean, y_mean, W, P, q)``; the number of columns of ``W`` is the
    count actually extracted.
    """
    X, y = _as_xy(X, y)
    x_mean = X.mean(axis=0)
    y_mean = float(y.mean())
    E = X - x_mean
    f = y - y_mean
    m = X.shape[1]
    W = np.empty((m, max_components))
    P = np.empty((m, max_components))
    q = np.empty(max_components)
    x_scale = np.linalg.norm(E)
    cov_scale = np.linalg.norm(E.T @ f)
    a = 0
    while a < max_components:
        c = E.T @ f
        c_norm = np.linalg.norm(c)
        if c_norm <= _RANK_TOL * cov_scale or np.linalg.norm(E) <= _RANK_TOL * x_scale:
            break
        w = c / c_norm
        t = E @ w
        tt = t @ t
        p = E.T @ t / tt
        W[:, a] = w
        P[:, a] = p
        q[a] = (f @ t) / tt
        E = E - np.outer(t, p)
        f = f - q[a] * t
        a += 1
    return x_mean, y_mean, W[:, :a], P[:, :a], q[:a]


def coefficients(W, P, q):
    """Regression vector ``W (P^T W)^-1 q`` of the latent-variable predictor."""
    return W @ np.linalg.solve(P.T @ W, q)


def fit(X, y, n_components: int, wavelengths=None) -> PlsModel:
    """Fit a PLS1 model with exactly ``n_components`` components.

    Raises :class:`DegenerateFitError` if the centred data run out of rank
    first, rather than silently returning fewer components.
    """
    X, y = _as_xy(X, y)
    n, m = X.shape
    if n < 2:
        raise DataError("PLS needs at least 2 samples")
    if not 1 <= n_components <= min(n - 1, m):
        raise DataError(f"n_components={n_components} must lie in 1..{min(n - 1, m)} for {n}x{m} data")
    if np.ptp(y) == 0:
        raise DataError("zero-variance response")
    x_mean, y_mean, W, P, q = nipals(X, y, n_components)
    if W.shape[1] < n_components:
        raise DegenerateFitError(n_components, W.shape[1])
    return PlsModel(x_mean, y_mean, W, P, q, coefficients(W, P, q),
                    None if wavelengths is None else np.asarray(wavelengths))


def predict(model: PlsModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1) if X.size else X.reshape(0, model.n_features)
    if X.shape[1] != model.n_features:
        raise DataError(f"model expects {model.n_features} features, got {X.shape[1]}")
    return model.y_mean + (X - model.x_mean) @ model.regression_coefficients


_SECTIONS = ("x_mean", "weights", "x_loadings", "y_loadings", "regression_coefficients", "wavelengths")


def save_model(model: PlsModel, path) -> None:
    """Write a flat ``section,row,col,value`` CSV that reloads exactly."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["section", "row", "col", "value"])
        w.writerow(["n_components", 0, 0, model.n_components])
        w.writerow(["y_mean", 0, 0, repr(float(model.y_mean))])
        for name in _SECTIONS:
            arr = getattr(model, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=float)
            if arr.ndim == 1:
                arr = arr.reshape(-1, 1)
            for (r, c), v in np.ndenumerate(arr):
                w.writerow([name, r, c, repr(float(v))])


def load_model(path) -> PlsModel:
    parts: dict[str, dict] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["section", "row", "col", "value"]:
            raise DataError(f"{path}: not a PLS model file")
        for rec in reader:
            parts.setdefault(rec["section"], {})[(int(rec["row"]), int(rec["col"]))] = float(rec["value"])

    def matrix(name):
        cells = parts.get(name)
        if cells is None:
            return None
        shape = tuple(max(k[i] for k in cells) + 1 for i in (0, 1))
        out = np.empty(shape)
        for k, v in cells.items():
            out[k] = v
        return out

    try:
        p = int(parts["n_components"][(0, 0)])
        wl = matrix("wavelengths")
        model = PlsModel(
            matrix("x_mean")[:, 0],
            parts["y_mean"][(0, 0)],
            matrix("weights"),
            matrix("x_loadings"),
            matrix("y_loadings")[:, 0],
            matrix("regression_coefficients")[:, 0],
            None if wl is None else wl[:, 0].astype(int),
        )
    except (KeyError, TypeError) as exc:
        raise DataError(f"{path}: incomplete PLS model file ({exc})") from None
    if model.n_components != p:
        raise DataError(f"{path}: component count mismatch")
    return model
