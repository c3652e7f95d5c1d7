"""
The preprocessing chain
=======================

Raw reflectance goes through detector offset correction, trimming,
conversion to absorbance, SSA smoothing, max normalisation and a first
derivative. Every stage can be switched off on its own.
"""

import numpy as np

from spikecal.preprocess import STAGES, PreprocessConfig, correct_detector_offsets, run_pipeline
from spikecal.benchmark import make_benchmark
from spikecal import ssa

lab, _ = make_benchmark(seed=0)
x = lab.X[0]
grid = lab.grid
print(f"raw grid {grid.start_nm}-{grid.end_nm} nm, step {grid.step_nm}, stages: {', '.join(STAGES)}")

# detector splices leave small jumps; the correction shifts later segments
fixed = correct_detector_offsets(lab.spectra[0], (1000, 1830))
for w in (1000, 1830):
    i = grid.index_of(w)
    print(f"jump at {w} nm: raw {x[i + 1] - x[i]:+.4f}  corrected {fixed.values[i + 1] - fixed.values[i]:+.4f}")

# SSA keeps the leading components of the trajectory matrix
absorb = -np.log10(x)
dec = ssa.decompose(absorb, 50)
share = np.cumsum(dec.singular_values**2) / np.sum(dec.singular_values**2)
print("cumulative energy of the first 5 SSA components:", np.round(share[:5], 5))

full = run_pipeline(lab, PreprocessConfig())
partial = run_pipeline(lab, PreprocessConfig(smooth=False, derivative=False))
print(f"full chain: {full.X.shape[1]} points on {full.grid.start_nm}-{full.grid.end_nm} nm")
print(f"without ssa and derivative: max of each spectrum = {partial.X.max(axis=1)[:3]}")
