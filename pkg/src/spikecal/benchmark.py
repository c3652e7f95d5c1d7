"""Seeded synthetic laboratory/field spectra for testing the spiking workflow.

Laboratory spectra are smooth absorbance curves built from a sloped
baseline plus broad Gaussian bands with random amplitudes; the target is a
linear function of two of those amplitudes. Field spectra come from the
same generator with a shifted, narrower target distribution, then get a
per-sample "moisture" distortion: multiplicative gain, additive offset and
water bands near 1450 and 1940 nm whose depth grows with moisture.
Both sets carry small detector offsets at 1000 and 1830 nm and white noise,
and are returned as reflectance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectra import LabeledSet, WavelengthGrid

__all__ = ["BenchmarkConfig", "make_benchmark"]

# (centre nm, width nm) of the sample-dependent absorption bands
_BANDS = ((480, 90), (900, 160), (1400, 70), (1720, 80), (1920, 90), (2210, 60), (2340, 70))
_WATER = ((1450, 60), (1940, 70))
# band amplitude loadings of the target (organic bands at 1720 and 2340 nm)
_TARGET_BANDS = {3: 1.0, 6: 0.6}


@dataclass(frozen=True)
class BenchmarkConfig:
    grid: WavelengthGrid = WavelengthGrid(350, 2500, 10)
    n_lab: int = 31
    n_field: int = 12
    lab_target_range: tuple = (5.0, 45.0)
    field_target_range: tuple = (15.0, 30.0)
    moisture_range: tuple = (0.4, 1.0)
    gain_per_moisture: float = 0.05
    offset_per_moisture: float = 0.015
    water_depth: float = 0.04
    band_scale: float = 0.04
    noise_sd: float = 0.002
    detector_jump_sd: float = 0.004


def _gauss(wl, centre, width):
    return np.exp(-0.5 * ((wl - centre) / width) ** 2)


def _spectra(rng, cfg, targets):
    wl = cfg.grid.wavelengths.astype(float)
    n = targets.size
    amps = rng.uniform(0.5, 1.5, size=(n, len(_BANDS)))
    # tie the organic bands to the target; the others vary freely
    for j, load in _TARGET_BANDS.items():
        amps[:, j] = load * targets / 20.0 + rng.normal(0, 0.03, n)
    base = 0.25 + 0.12 * (wl - wl[0]) / (wl[-1] - wl[0])
    A = base + 0.05 * rng.normal(size=(n, 1))
    A = A + cfg.band_scale * amps @ np.array([_gauss(wl, c, w) for c, w in _BANDS])
    return A


def _to_reflectance(rng, cfg, A):
    wl = cfg.grid.wavelengths
    A = A + cfg.noise_sd * rng.normal(size=A.shape)
    R = 10.0 ** (-A)
    for w in (1000, 1830):
        R[:, wl > w] += cfg.detector_jump_sd * rng.normal(size=(A.shape[0], 1))
    return np.clip(R, 1e-4, 1.0)


def make_benchmark(seed: int = 0, cfg: BenchmarkConfig = BenchmarkConfig()):
    """Return ``(lab, field)`` labeled sets in reflectance, tagged L and F."""
    rng = np.random.default_rng(seed)
    wl = cfg.grid.wavelengths.astype(float)

    y_lab = rng.uniform(*cfg.lab_target_range, size=cfg.n_lab)
    A_lab = _spectra(rng, cfg, y_lab)

    y_field = rng.uniform(*cfg.field_target_range, size=cfg.n_field)
    A_field = _spectra(rng, cfg, y_field)
    moisture = rng.uniform(*cfg.moisture_range, size=(cfg.n_field, 1))
    water = sum(_gauss(wl, c, w) for c, w in _WATER)
    A_field = (1 + cfg.gain_per_moisture * moisture) * A_field
    A_field = A_field + cfg.offset_per_moisture * moisture + cfg.water_depth * moisture * water

    lab = LabeledSet(
        tuple(f"L{i + 1}" for i in range(cfg.n_lab)),
        _to_reflectance(rng, cfg, A_lab), cfg.grid, "L", targets=np.round(y_lab, 3),
    )
    field_set = LabeledSet(
        tuple(f"F{i + 1}" for i in range(cfg.n_field)),
        _to_reflectance(rng, cfg, A_field), cfg.grid, "F", targets=np.round(y_field, 3),
    )
    return lab, field_set
