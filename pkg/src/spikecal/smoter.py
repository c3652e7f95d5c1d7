"""SMOTE for regression.

Synthetic spectra are placed on the segment between a source sample and one
of its ``k`` nearest neighbours; the synthetic target is the
distance-weighted average of the two source targets. Spectra are expected
in raw (untreated) form, since pretreatment is applied to synthetic data
afterwards along with everything else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .spectra import LabeledSet, Spectrum

__all__ = [
    "SmoteParams",
    "SyntheticSample",
    "nearest_neighbours",
    "synthesize_one",
    "generate_samples",
    "generate_set",
]


@dataclass(frozen=True)
class SmoteParams:
    """Amount of oversampling ``n_percent``, neighbour count ``k`` and RNG seed.

    ``n_percent`` below 100 draws a random subset of the source; from 100 up
    it must be a multiple of 100 (``n_percent / 100`` samples per source).
    """

    n_percent: int = 200
    k: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.n_percent < 1:
            raise DataError(f"SMOTE N must be >= 1, got {self.n_percent}")
        if self.n_percent >= 100 and self.n_percent % 100:
            raise DataError(f"SMOTE N >= 100 must be a multiple of 100, got {self.n_percent}")
        if self.k < 1:
            raise DataError(f"SMOTE k must be >= 1, got {self.k}")
        if not 0 <= self.seed < 2**64:
            raise DataError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def check_source(self, size: int) -> None:
        if size < 2:
            raise DataError(f"SMOTE needs at least 2 source samples, got {size}")
        if self.k > size - 1:
            raise DataError(f"k={self.k} exceeds the {size - 1} neighbours available")

    def output_size(self, size: int) -> int:
        if self.n_percent < 100:
            return (self.n_percent * size) // 100
        return (self.n_percent // 100) * size


@dataclass(frozen=True)
class SyntheticSample:
    spectrum: Spectrum
    target: float
    parent_id: str
    neighbor_id: str
    weight: float
    d1: float  # distance to parent
    d2: float  # distance to neighbour


def _distances(X, i):
    return np.sqrt(np.sum((X - X[i]) ** 2, axis=1))


def nearest_neighbours(data, i: int, k: int) -> list[int]:
    """Indices of the ``k`` spectra closest to spectrum ``i`` (Euclidean).

    Ordered by distance, ties going to the lower index; ``i`` is excluded.
    """
    X = data.X if hasattr(data, "X") else np.asarray(data, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise DataError("nearest neighbours need at least 2 samples")
    if not 1 <= k <= n - 1:
        raise DataError(f"k={k} must lie in 1..{n - 1}")
    d = _distances(X, i)
    order = [j for j in np.lexsort((np.arange(n), d)) if j != i]
    return [int(j) for j in order[:k]]


def synthesize_one(parent, neighbor, weight: float, sample_id: str = "") -> SyntheticSample:
    """Interpolate between ``parent`` and ``neighbor``.

    Both arguments are ``(Spectrum, target)`` pairs. The spectrum moves a
    fraction ``weight`` of the way from parent to neighbour; the target is
    ``(d2 * t_parent + d1 * t_neighbor) / (d1 + d2)`` with ``d1``, ``d2`` the
    distances from the new spectrum to parent and neighbour.
    """
    (ps, pt), (ns, nt) = parent, neighbor
    if ps.grid != ns.grid:
        raise DataError(f"grid mismatch between {ps.id!r} and {ns.id!r}")
    if not 0.0 <= weight <= 1.0:
        raise DataError(f"weight must lie in [0, 1], got {weight}")
    new = ps.values + weight * (ns.values - ps.values)
    d1 = float(np.linalg.norm(new - ps.values))
    d2 = float(np.linalg.norm(new - ns.values))
    if d1 + d2 == 0:
        target = float(pt)
    else:
        target = (d2 * pt + d1 * nt) / (d1 + d2)
        # rounding guard: the weighted mean cannot leave [pt, nt]
        target = float(min(max(target, min(pt, nt)), max(pt, nt)))
    return SyntheticSample(
        Spectrum(sample_id or f"S{ps.id}", new, ps.grid), target, ps.id, ns.id, float(weight), d1, d2
    )


def generate_samples(source: LabeledSet, params: SmoteParams) -> list[SyntheticSample]:
    """Synthetic samples in (parent, round) order, reproducible from ``params.seed``.

    Random draws, in order: the parent subset when ``n_percent < 100``
    (without replacement, then sorted), then per parent and round a
    neighbour position in ``0..k-1`` followed by a weight on ``[0, 1)``.
    Neighbours are searched over the whole source set.
    """
    T = len(source)
    params.check_source(T)
    rng = np.random.default_rng(params.seed)
    if params.n_percent < 100:
        parents = np.sort(rng.choice(T, size=params.output_size(T), replace=False))
        rounds = 1
    else:
        parents = np.arange(T)
        rounds = params.n_percent // 100

    spectra = source.spectra
    out = []
    for i in parents:
        nns = nearest_neighbours(source, int(i), params.k)
        for r in range(1, rounds + 1):
            j = nns[int(rng.integers(params.k))]
            weight = float(rng.random())
            out.append(
                synthesize_one(
                    (spectra[i], source.targets[i]),
                    (spectra[j], source.targets[j]),
                    weight,
                    sample_id=f"S{source.ids[i]}_{r}",
                )
            )
    return out


def generate_set(source: LabeledSet, params: SmoteParams) -> LabeledSet:
    """Synthetic samples as a labeled set tagged ``"S"``."""
    samples = generate_samples(source, params)
    if not samples:
        raise DataError(f"N={params.n_percent}% of {len(source)} samples yields no synthetic data")
    return LabeledSet(
        tuple(s.spectrum.id for s in samples),
        np.vstack([s.spectrum.values for s in samples]),
        source.grid,
        "S",
        targets=np.array([s.target for s in samples]),
    )
