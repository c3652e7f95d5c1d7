"""Principal component analysis of spectra and projection of new data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError

__all__ = ["PcaModel", "fit_pca", "project"]


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    loadings: np.ndarray  # m x c, orthonormal columns
    explained_variance_ratio: np.ndarray

    @property
    def n_components(self):
        return self.loadings.shape[1]


def fit_pca(X, n_components: int) -> PcaModel:
    """Mean-centred PCA via SVD.

    Explained-variance ratios are relative to the total variance of the
    data, so they sum to at most one when fewer components are kept.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DataError(f"PCA needs a 2-d array with at least 2 rows, got shape {X.shape}")
    n, m = X.shape
    if not 1 <= n_components <= min(n - 1, m):
        raise DataError(f"n_components={n_components} must lie in 1..{min(n - 1, m)}")
    mean = X.mean(axis=0)
    _, s, vt = np.linalg.svd(X - mean, full_matrices=False)
    total = float(np.sum(s**2))
    if total == 0:
        raise DataError("PCA input has zero variance")
    # sign convention: largest-magnitude loading entry positive
    V = vt[:n_components].T
    signs = np.sign(V[np.argmax(np.abs(V), axis=0), np.arange(n_components)])
    V = V * np.where(signs == 0, 1.0, signs)
    return PcaModel(mean, V, s[:n_components] ** 2 / total)


def project(model: PcaModel, X) -> np.ndarray:
    """Scores ``(X - mean) @ loadings``."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != model.mean.size:
        raise DataError(f"PCA model expects {model.mean.size} features, got {X.shape[1]}")
    return (X - model.mean) @ model.loadings
