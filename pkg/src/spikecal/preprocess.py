"""Spectral pretreatment chain.

Stages run in a fixed order: detector offset correction, trimming to the
high signal-to-noise range, conversion to absorbance, SSA smoothing,
normalisation by the maximum and a forward-difference first derivative.
The same :class:`PreprocessConfig` is applied to laboratory, field and
synthetic spectra alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ssa as ssa_mod
from .ssa import SsaConfig
from .errors import DataError, PipelineError
from .spectra import LabeledSet, SpectraSet, Spectrum, WavelengthGrid

__all__ = [
    "PreprocessConfig",
    "STAGES",
    "correct_detector_offsets",
    "trim",
    "to_absorbance",
    "max_normalize",
    "first_derivative",
    "run_pipeline",
]

STAGES = ("offset", "trim", "absorbance", "ssa", "normalize", "derivative")


@dataclass(frozen=True)
class PreprocessConfig:
    splice_wavelengths_nm: tuple = (1000, 1830)
    trim_lo_nm: int = 450
    trim_hi_nm: int = 2400
    ssa: SsaConfig = field(default_factory=SsaConfig)
    offset: bool = True
    trim: bool = True
    absorbance: bool = True
    smooth: bool = True
    normalize: bool = True
    derivative: bool = True

    def __post_init__(self):
        object.__setattr__(self, "splice_wavelengths_nm", tuple(int(w) for w in self.splice_wavelengths_nm))

    @classmethod
    def disabled(cls, **kw):
        flags = dict(offset=False, trim=False, absorbance=False, smooth=False, normalize=False, derivative=False)
        flags.update(kw)
        return cls(**flags)

    def validate(self, grid: WavelengthGrid) -> None:
        """Check the configuration against the raw input grid."""
        if self.offset:
            _check_splices(grid, self.splice_wavelengths_nm)
        if self.trim:
            if self.trim_lo_nm >= self.trim_hi_nm:
                raise DataError(f"trim bounds {self.trim_lo_nm}..{self.trim_hi_nm} are not increasing")
            grid.index_of(self.trim_lo_nm)
            grid.index_of(self.trim_hi_nm)


def _check_splices(grid, splices):
    if list(splices) != sorted(set(splices)):
        raise DataError(f"splice wavelengths must be strictly increasing, got {list(splices)}")
    for w in splices:
        if not grid.contains(w):
            raise DataError(f"splice {w} nm is not on grid {grid}")
        if w <= grid.start_nm or w >= grid.end_nm:
            raise DataError(f"splice {w} nm lies on the edge of grid {grid}")


def correct_detector_offsets(s: Spectrum, splices=(1000, 1830)) -> Spectrum:
    """Remove additive jumps between detector segments.

    A splice at ``w`` separates the segment ending at ``w`` from the one
    starting at ``w + step``. The jump is the adjacent-point difference
    ``v[w + step] - v[w]``. The central segment is held fixed (with an even
    number of segments, the one left of centre) and every other segment is
    shifted so that the jump to its inner neighbour vanishes.
    """
    splices = tuple(int(w) for w in splices)
    _check_splices(s.grid, splices)
    v = np.array(s.values, dtype=float)
    cuts = [s.grid.index_of(w) + 1 for w in splices]
    bounds = [0, *cuts, v.size]
    segments = list(zip(bounds[:-1], bounds[1:]))
    anchor = (len(segments) - 1) // 2
    for j in range(anchor + 1, len(segments)):
        lo = segments[j][0]
        v[lo:] -= v[lo] - v[lo - 1]
    for j in range(anchor - 1, -1, -1):
        hi = segments[j][1]
        v[:hi] += v[hi] - v[hi - 1]
    return s.with_values(v)


def trim(s: Spectrum, lo_nm: int, hi_nm: int) -> Spectrum:
    if lo_nm >= hi_nm:
        raise DataError(f"trim bounds {lo_nm}..{hi_nm} are not increasing")
    i = s.grid.index_of(lo_nm)
    j = s.grid.index_of(hi_nm)
    return s.with_values(s.values[i : j + 1], WavelengthGrid(lo_nm, hi_nm, s.grid.step_nm))


def to_absorbance(s: Spectrum) -> Spectrum:
    """``log10(1 / reflectance)``; reflectance must be strictly positive."""
    bad = np.flatnonzero(s.values <= 0)
    if bad.size:
        wl = s.grid.wavelengths[bad[0]]
        raise DataError(f"non-positive reflectance {s.values[bad[0]]} at {wl} nm in {s.id!r}")
    return s.with_values(-np.log10(s.values))


def smooth(s: Spectrum, cfg: SsaConfig) -> Spectrum:
    return s.with_values(ssa_mod.smooth(s.values, cfg))


def max_normalize(s: Spectrum) -> Spectrum:
    peak = s.values.max()
    if not peak > 0:
        raise DataError(f"cannot normalise {s.id!r}: maximum {peak} is not positive")
    return s.with_values(s.values / peak)


def first_derivative(s: Spectrum) -> Spectrum:
    """Forward difference per nm, labelled by the left end of each interval."""
    if len(s.grid) < 2:
        raise DataError(f"derivative of {s.id!r} needs at least 2 points")
    g = s.grid
    return s.with_values(np.diff(s.values) / g.step_nm, WavelengthGrid(g.start_nm, g.end_nm - g.step_nm, g.step_nm))


def _stages(cfg: PreprocessConfig):
    if cfg.offset:
        yield "offset", lambda s: correct_detector_offsets(s, cfg.splice_wavelengths_nm)
    if cfg.trim:
        yield "trim", lambda s: trim(s, cfg.trim_lo_nm, cfg.trim_hi_nm)
    if cfg.absorbance:
        yield "absorbance", to_absorbance
    if cfg.smooth:
        yield "ssa", lambda s: smooth(s, cfg.ssa)
    if cfg.normalize:
        yield "normalize", max_normalize
    if cfg.derivative:
        yield "derivative", first_derivative


def process_spectrum(s: Spectrum, cfg: PreprocessConfig) -> Spectrum:
    for name, stage in _stages(cfg):
        try:
            s = stage(s)
        except DataError as exc:
            raise PipelineError(s.id, name, str(exc)) from exc
    return s


def run_pipeline(data: SpectraSet, cfg: PreprocessConfig = PreprocessConfig()):
    """Apply every enabled stage to each spectrum; ids, targets and order are kept."""
    cfg.validate(data.grid)
    out = [process_spectrum(s, cfg) for s in data.spectra]
    X = np.vstack([s.values for s in out]) if out else np.zeros((0, 0))
    grid = out[0].grid if out else data.grid
    if isinstance(data, LabeledSet):
        return data.replace(X=X, grid=grid)
    return SpectraSet(data.ids, X, grid, data.tag)
