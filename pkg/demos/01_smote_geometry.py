"""
SMOTE for regression on spectra
===============================

Each synthetic spectrum sits on the segment between a parent field
spectrum and one of its k nearest neighbours. Its target is interpolated
by distance, so the closer endpoint dominates.
"""

import numpy as np

from spikecal.benchmark import make_benchmark
from spikecal.smoter import SmoteParams, generate_samples, nearest_neighbours

_, field = make_benchmark(seed=0)
print(f"field set: {len(field)} spectra x {field.X.shape[1]} wavelengths")

# neighbours of the first field spectrum, nearest first
print("neighbours of F1:", [field.ids[j] for j in nearest_neighbours(field, 0, k=5)])

# N=200 asks for two synthetic spectra per parent
params = SmoteParams(n_percent=200, k=5, seed=3)
samples = generate_samples(field, params)
print(f"N={params.n_percent}, k={params.k}: {len(samples)} synthetic spectra")

# check the geometry of the first few by hand
index = {sid: i for i, sid in enumerate(field.ids)}
for s in samples[:4]:
    p, q = field.X[index[s.parent_id]], field.X[index[s.neighbor_id]]
    tp, tq = field.targets[index[s.parent_id]], field.targets[index[s.neighbor_id]]
    on_segment = np.allclose(s.spectrum.values, p + s.weight * (q - p))
    print(
        f"{s.spectrum.id:>8}: parent {s.parent_id:>3} ({tp:6.2f}) neighbour {s.neighbor_id:>3} ({tq:6.2f})"
        f"  w={s.weight:.3f}  target={s.target:6.2f}  on segment: {on_segment}"
    )
