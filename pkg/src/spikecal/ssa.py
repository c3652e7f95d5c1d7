"""Singular spectrum analysis used as a smoothing filter.

A series of length ``n`` is embedded into the ``L x K`` trajectory (Hankel)
matrix, ``K = n - L + 1``, whose column ``j`` is ``series[j:j+L]``. The SVD of
that matrix yields eigentriples; a subset of them is mapped back to a series
by averaging along anti-diagonals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DataError

__all__ = [
    "SsaConfig",
    "SsaDecomposition",
    "trajectory_matrix",
    "hankelize",
    "decompose",
    "reconstruct",
    "smooth",
]


@dataclass(frozen=True)
class SsaConfig:
    """Smoothing parameters.

    ``rank`` leading eigentriples are kept unless ``energy_threshold`` is set,
    in which case the smallest leading set whose share of the squared
    singular values reaches the threshold is used instead.
    """

    window_len: int = 50
    rank: int = 10
    energy_threshold: float | None = None

    def __post_init__(self):
        if self.window_len < 2:
            raise DataError(f"SSA window_len must be >= 2, got {self.window_len}")
        if not 1 <= self.rank <= self.window_len:
            raise DataError(f"SSA rank must lie in 1..{self.window_len}, got {self.rank}")
        if self.energy_threshold is not None and not 0 < self.energy_threshold <= 1:
            raise DataError(f"energy_threshold must lie in (0, 1], got {self.energy_threshold}")

    def check_length(self, n: int) -> None:
        if not 2 <= self.window_len <= n / 2:
            raise DataError(
                f"SSA window_len {self.window_len} invalid for series of length {n} "
                f"(need 2 <= L <= {n // 2})"
            )


@dataclass(frozen=True)
class SsaDecomposition:
    singular_values: np.ndarray
    left_vectors: np.ndarray  # L x d
    right_vectors: np.ndarray  # K x d
    series_length: int

    @property
    def window_len(self):
        return self.left_vectors.shape[0]

    def __len__(self):
        return self.singular_values.size


def trajectory_matrix(series, window_len: int) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    k = x.size - window_len + 1
    return np.lib.stride_tricks.sliding_window_view(x, window_len)[:k].T.copy()


def hankelize(matrix: np.ndarray) -> np.ndarray:
    """Average an ``L x K`` matrix along its anti-diagonals into a series."""
    L, K = matrix.shape
    n = L + K - 1
    total = np.zeros(n)
    counts = np.zeros(n)
    for i in range(L):
        total[i : i + K] += matrix[i]
        counts[i : i + K] += 1
    return total / counts


def decompose(series, window_len: int) -> SsaDecomposition:
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise DataError("SSA expects a 1-d series")
    n = x.size
    if n < 4:
        raise DataError(f"SSA needs a series of length >= 4, got {n}")
    if not 2 <= window_len <= n / 2:
        raise DataError(f"window length {window_len} outside 2..{n // 2} for length {n}")
    if not np.all(np.isfinite(x)):
        raise DataError("SSA input contains non-finite values")
    u, s, vt = np.linalg.svd(trajectory_matrix(x, window_len), full_matrices=False)
    return SsaDecomposition(s, u, vt.T, n)


def reconstruct(dec: SsaDecomposition, components: Iterable[int]) -> np.ndarray:
    """Series reconstructed from the given 1-based eigentriple indices."""
    idx = sorted(set(int(c) for c in components))
    if not idx:
        raise DataError("no SSA components selected")
    d = len(dec)
    if idx[0] < 1 or idx[-1] > d:
        raise DataError(f"SSA component indices must lie in 1..{d}, got {idx}")
    sel = np.asarray(idx) - 1
    part = (dec.left_vectors[:, sel] * dec.singular_values[sel]) @ dec.right_vectors[:, sel].T
    return hankelize(part)


def n_components_for(dec: SsaDecomposition, cfg: SsaConfig) -> int:
    if cfg.energy_threshold is None:
        return min(cfg.rank, len(dec))
    energy = np.cumsum(dec.singular_values**2)
    if energy[-1] == 0:
        return len(dec)
    r = int(np.searchsorted(energy / energy[-1], cfg.energy_threshold)) + 1
    return min(r, len(dec))


def smooth(series, cfg: SsaConfig = SsaConfig()) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    cfg.check_length(x.size)
    dec = decompose(x, cfg.window_len)
    return reconstruct(dec, range(1, n_components_for(dec, cfg) + 1))
