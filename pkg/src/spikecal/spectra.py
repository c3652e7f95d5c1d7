"""Wavelength-gridded spectra, labeled datasets and their CSV layout.

Labeled files use the header ``id,target,<wl>,<wl>,...`` and unlabeled
(prediction-only) files use ``id,<wl>,...``. Wavelengths are integer
nanometres forming an arithmetic sequence.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError

__all__ = [
    "WavelengthGrid",
    "Spectrum",
    "SpectraSet",
    "LabeledSet",
    "assert_same_grid",
    "concat",
    "load_labeled_csv",
    "load_spectra_csv",
    "write_labeled_csv",
    "write_spectra_csv",
]


@dataclass(frozen=True)
class WavelengthGrid:
    """Inclusive integer grid ``start_nm, start_nm + step_nm, ..., end_nm``."""

    start_nm: int
    end_nm: int
    step_nm: int = 1

    def __post_init__(self):
        for name in ("start_nm", "end_nm", "step_nm"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DataError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.step_nm < 1:
            raise DataError(f"step_nm must be >= 1, got {self.step_nm}")
        if self.end_nm < self.start_nm:
            raise DataError(f"end_nm {self.end_nm} is below start_nm {self.start_nm}")
        if (self.end_nm - self.start_nm) % self.step_nm:
            raise DataError(
                f"range {self.start_nm}-{self.end_nm} is not divisible by step {self.step_nm}"
            )

    def __len__(self):
        return (self.end_nm - self.start_nm) // self.step_nm + 1

    @property
    def wavelengths(self) -> np.ndarray:
        return np.arange(self.start_nm, self.end_nm + 1, self.step_nm)

    def contains(self, wavelength_nm: int) -> bool:
        return (
            self.start_nm <= wavelength_nm <= self.end_nm
            and (wavelength_nm - self.start_nm) % self.step_nm == 0
        )

    def index_of(self, wavelength_nm: int) -> int:
        if not self.contains(wavelength_nm):
            raise DataError(f"wavelength {wavelength_nm} nm is not on grid {self}")
        return (wavelength_nm - self.start_nm) // self.step_nm

    @classmethod
    def from_wavelengths(cls, wavelengths: Sequence[int]) -> "WavelengthGrid":
        wl = [int(w) for w in wavelengths]
        if not wl:
            raise DataError("no wavelength columns")
        if len(wl) == 1:
            return cls(wl[0], wl[0], 1)
        step = wl[1] - wl[0]
        if step < 1 or any(b - a != step for a, b in zip(wl, wl[1:])):
            raise DataError(f"wavelength header is not an increasing arithmetic sequence: {wl[:6]}...")
        return cls(wl[0], wl[-1], step)

    def __str__(self):
        return f"{self.start_nm}-{self.end_nm} nm step {self.step_nm}"


def _frozen(a, ndim):
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise DataError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Spectrum:
    id: str
    values: np.ndarray
    grid: WavelengthGrid

    def __post_init__(self):
        values = _frozen(self.values, 1)
        if values.size != len(self.grid):
            raise DataError(
                f"spectrum {self.id!r} has {values.size} values for a grid of {len(self.grid)}"
            )
        if not np.all(np.isfinite(values)):
            raise DataError(f"spectrum {self.id!r} contains non-finite values")
        object.__setattr__(self, "values", values)

    def with_values(self, values, grid: WavelengthGrid | None = None) -> "Spectrum":
        return Spectrum(self.id, values, self.grid if grid is None else grid)


@dataclass(frozen=True)
class SpectraSet:
    """Spectra on one shared grid, stored row-wise in ``X`` (n x m)."""

    ids: tuple
    X: np.ndarray
    grid: WavelengthGrid
    tag: str = ""

    def __post_init__(self):
        ids = tuple(str(i) for i in self.ids)
        X = _frozen(self.X, 2) if np.size(self.X) else np.zeros((len(ids), len(self.grid)))
        if X.shape != (len(ids), len(self.grid)):
            raise DataError(
                f"matrix shape {X.shape} does not match {len(ids)} ids x {len(self.grid)} grid points"
            )
        if not np.all(np.isfinite(X)):
            bad = int(np.argwhere(~np.isfinite(X))[0, 0])
            raise DataError(f"spectrum {ids[bad]!r} contains non-finite values")
        if len(set(ids)) != len(ids):
            seen, dup = set(), None
            for i in ids:
                if i in seen:
                    dup = i
                    break
                seen.add(i)
            raise DataError(f"duplicate sample id {dup!r}")
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "X", X)

    def __len__(self):
        return len(self.ids)

    @property
    def spectra(self) -> list[Spectrum]:
        return [Spectrum(i, row, self.grid) for i, row in zip(self.ids, self.X)]

    @classmethod
    def from_spectra(cls, spectra: Iterable[Spectrum], tag: str = "") -> "SpectraSet":
        spectra = list(spectra)
        if not spectra:
            raise DataError("empty dataset")
        grid = spectra[0].grid
        for s in spectra[1:]:
            if s.grid != grid:
                raise DataError(f"spectrum {s.id!r} grid {s.grid} differs from {grid}")
        return cls(tuple(s.id for s in spectra), np.vstack([s.values for s in spectra]), grid, tag)


@dataclass(frozen=True)
class LabeledSet(SpectraSet):
    """Spectra paired with non-negative scalar targets.

    ``tag`` names the dataset role: ``"L"`` for laboratory calibration,
    ``"F"`` for field validation, ``"S"`` for synthetic samples.
    """

    targets: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        super().__post_init__()
        y = _frozen(self.targets, 1)
        if y.size != len(self.ids):
            raise DataError(f"{y.size} targets for {len(self.ids)} spectra")
        if len(self.ids) < 1:
            raise DataError("empty dataset")
        if not np.all(np.isfinite(y)):
            raise DataError("targets must be finite")
        if np.any(y < 0):
            raise DataError(f"targets must be >= 0, found {y.min()}")
        object.__setattr__(self, "targets", y)

    @classmethod
    def from_spectra(cls, spectra, targets=None, tag=""):
        base = SpectraSet.from_spectra(spectra, tag)
        return cls(base.ids, base.X, base.grid, tag, targets=targets)

    def replace(self, X=None, grid=None, targets=None, ids=None, tag=None) -> "LabeledSet":
        return LabeledSet(
            self.ids if ids is None else ids,
            self.X if X is None else X,
            self.grid if grid is None else grid,
            self.tag if tag is None else tag,
            targets=self.targets if targets is None else targets,
        )

    def subset(self, index) -> "LabeledSet":
        index = np.asarray(index, dtype=int)
        return self.replace(
            X=self.X[index], targets=self.targets[index], ids=tuple(self.ids[i] for i in index)
        )


def assert_same_grid(a: SpectraSet, b: SpectraSet) -> None:
    """Raise :class:`DataError` unless both sets are non-empty and share a grid."""
    for s in (a, b):
        if len(s) == 0:
            raise DataError(f"empty dataset {s.tag!r}")
    if a.grid != b.grid:
        raise DataError(f"grid mismatch: {a.tag or 'a'} has {a.grid}, {b.tag or 'b'} has {b.grid}")


def concat(sets: Sequence[LabeledSet], tag: str = "") -> LabeledSet:
    """Stack labeled sets row-wise; all must share one grid and have unique ids."""
    if not sets:
        raise DataError("nothing to concatenate")
    for s in sets[1:]:
        assert_same_grid(sets[0], s)
    return LabeledSet(
        tuple(i for s in sets for i in s.ids),
        np.vstack([s.X for s in sets]),
        sets[0].grid,
        tag,
        targets=np.concatenate([s.targets for s in sets]),
    )


def _parse_float(cell, row_no, col):
    try:
        return float(cell)
    except ValueError:
        raise DataError(f"row {row_no}, column {col!r}: non-numeric cell {cell!r}") from None


def _read(path, labeled, reflectance_percent):
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    n_meta = 2 if labeled else 1
    if header[0] != "id" or (labeled and (len(header) < 2 or header[1] != "target")):
        expected = "id,target,<wavelengths>" if labeled else "id,<wavelengths>"
        raise DataError(f"{path}: header must start with {expected}")
    try:
        wavelengths = [int(h) for h in header[n_meta:]]
    except ValueError:
        raise DataError(f"{path}: wavelength headers must be integers in nm") from None
    grid = WavelengthGrid.from_wavelengths(wavelengths)

    ids, targets, values = [], [], []
    for row_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataError(f"{path}: row {row_no} has {len(row)} cells, header has {len(header)}")
        ids.append(row[0].strip())
        if labeled:
            targets.append(_parse_float(row[1], row_no, "target"))
        values.append([_parse_float(c, row_no, h) for c, h in zip(row[n_meta:], header[n_meta:])])
    if not ids:
        raise DataError(f"{path}: no data rows")
    X = np.array(values, dtype=float)
    if reflectance_percent:
        X = X / 100.0
    return ids, targets, X, grid


def load_labeled_csv(path, tag: str = "", reflectance_percent: bool = False) -> LabeledSet:
    """Read a labeled CSV file; row order is preserved.

    With ``reflectance_percent`` the spectral values are divided by 100.
    """
    ids, targets, X, grid = _read(path, True, reflectance_percent)
    return LabeledSet(tuple(ids), X, grid, tag, targets=np.array(targets))


def load_spectra_csv(path, tag: str = "", reflectance_percent: bool = False) -> SpectraSet:
    """Read an unlabeled (``id,<wavelengths>``) CSV file."""
    ids, _, X, grid = _read(path, False, reflectance_percent)
    return SpectraSet(tuple(ids), X, grid, tag)


def _fmt(x):
    return repr(float(x))


def write_labeled_csv(data: LabeledSet, path) -> None:
    """Write with shortest round-trip float formatting (exact reload)."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "target", *map(str, data.grid.wavelengths)])
        for i, t, row in zip(data.ids, data.targets, data.X):
            w.writerow([i, _fmt(t), *map(_fmt, row)])


def write_spectra_csv(data: SpectraSet, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", *map(str, data.grid.wavelengths)])
        for i, row in zip(data.ids, data.X):
            w.writerow([i, *map(_fmt, row)])
