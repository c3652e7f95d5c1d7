"""
Where do synthetic spectra land in PCA space?
=============================================

PCA is fitted on the lab and field spectra. Synthetic spectra are convex
combinations of field spectra, so their scores fall inside the field
scores' convex hull.
"""

import numpy as np

from spikecal.benchmark import make_benchmark
from spikecal.pca import fit_pca, project
from spikecal.preprocess import PreprocessConfig, run_pipeline
from spikecal.smoter import SmoteParams, generate_set

lab, field = make_benchmark(seed=0)
syn = generate_set(field, SmoteParams(300, 5, seed=1))
cfg = PreprocessConfig()
L, F, S = (run_pipeline(d, cfg) for d in (lab, field, syn))

model = fit_pca(np.vstack([L.X, F.X]), 3)
print("explained variance ratio:", np.round(model.explained_variance_ratio, 3))
field_scores = project(model, F.X)
centre = field_scores.mean(axis=0)
for name, d in (("lab", L), ("field", F), ("synthetic", S)):
    sc = project(model, d.X)
    dist = np.linalg.norm(sc - centre, axis=1)
    print(f"{name:>9}: median distance to the field centroid {np.median(dist):.4f}  (n={len(d)})")

# synthetic scores stay within the field bounding box on every component
syn_scores = project(model, S.X)
inside = np.all((syn_scores >= field_scores.min(0) - 1e-12) & (syn_scores <= field_scores.max(0) + 1e-12))
print("synthetic scores inside the field score range:", bool(inside))
