"""Monte Carlo replication of the SMOTE -> spike -> select -> validate chain.

Replicate ``i`` of a batch uses the seed ``derive_seed(master_seed, i)``, so
any replicate can be re-run on its own and the batch result does not depend
on how the work is scheduled.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from . import pls, smoter
from .errors import DataError, NumericalError, SpikecalError
from .preprocess import PreprocessConfig, run_pipeline
from .selection import DEFAULT_P_RANGE, MetricsReport, evaluate, select_components
from .spectra import LabeledSet, assert_same_grid, concat

__all__ = [
    "ReplicateRecord",
    "AggregateReport",
    "AGGREGATE_FIELDS",
    "splitmix64",
    "derive_seed",
    "run_single",
    "run_baseline",
    "run_replicates",
    "aggregate",
    "pick_representative",
]

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One SplitMix64 step: add the golden-ratio increment, then finalise."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Seed of replicate ``index``: ``splitmix64(master ^ splitmix64(index))``."""
    return splitmix64((int(master_seed) & _MASK) ^ splitmix64(int(index)))


@dataclass(frozen=True)
class ReplicateRecord:
    replicate_index: int
    seed: int | None
    smote_params: smoter.SmoteParams | None
    best_p: int | None = None
    calibration: MetricsReport | None = None
    validation: MetricsReport | None = None
    error: str | None = None
    n_synthetic: int = 0
    # per-sample predictions behind the scatter plots; excluded from equality
    calibration_ids: tuple = field(default=(), compare=False, repr=False)
    calibration_measured: np.ndarray | None = field(default=None, compare=False, repr=False)
    calibration_predicted: np.ndarray | None = field(default=None, compare=False, repr=False)
    validation_ids: tuple = field(default=(), compare=False, repr=False)
    validation_predicted: np.ndarray | None = field(default=None, compare=False, repr=False)

    @property
    def ok(self) -> bool:
        return self.error is None


def _calibrate(cal: LabeledSet, val: LabeledSet, p_range, index, seed, params, n_syn):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sel = select_components(cal.X, cal.targets, p_range)
    model = pls.fit(cal.X, cal.targets, sel.best_p)
    val_pred = pls.predict(model, val.X)
    return ReplicateRecord(
        replicate_index=index,
        seed=seed,
        smote_params=params,
        best_p=sel.best_p,
        calibration=evaluate(sel.loocv_predictions_best, cal.targets),
        validation=evaluate(val_pred, val.targets),
        n_synthetic=n_syn,
        calibration_ids=cal.ids,
        calibration_measured=np.asarray(cal.targets),
        calibration_predicted=sel.loocv_predictions_best,
        validation_ids=val.ids,
        validation_predicted=val_pred,
    )


def run_baseline(lab: LabeledSet, field_set: LabeledSet, cfg=PreprocessConfig(), p_range=DEFAULT_P_RANGE):
    """The unspiked model: calibrate on the laboratory set alone."""
    assert_same_grid(lab, field_set)
    return _calibrate(run_pipeline(lab, cfg), run_pipeline(field_set, cfg), p_range, 0, None, None, 0)


def run_single(
    lab: LabeledSet,
    field_set: LabeledSet,
    params: smoter.SmoteParams,
    cfg: PreprocessConfig = PreprocessConfig(),
    p_range=DEFAULT_P_RANGE,
    index: int = 0,
    lab_pre: LabeledSet | None = None,
    field_pre: LabeledSet | None = None,
) -> ReplicateRecord:
    """One pipeline run with ``params.seed`` as the SMOTE seed.

    Synthetic spectra are generated from the raw field set, pretreated with
    the shared config, appended to the pretreated laboratory set, and the
    spiked set is calibrated and validated on the field set. Pretreated
    ``lab_pre`` / ``field_pre`` may be passed in to skip recomputation; the
    pipeline is per-spectrum, so results are identical.
    """
    assert_same_grid(lab, field_set)
    lab_pre = run_pipeline(lab, cfg) if lab_pre is None else lab_pre
    field_pre = run_pipeline(field_set, cfg) if field_pre is None else field_pre
    synthetic = run_pipeline(smoter.generate_set(field_set, params), cfg)
    cal = concat([lab_pre, synthetic], tag="L+S")
    return _calibrate(cal, field_pre, p_range, index, params.seed, params, len(synthetic))


def _replicate(index, lab, field_set, params, cfg, p_range, master_seed, lab_pre, field_pre):
    seed = derive_seed(master_seed, index)
    p = replace(params, seed=seed)
    try:
        return run_single(lab, field_set, p, cfg, p_range, index, lab_pre, field_pre)
    except (SpikecalError, np.linalg.LinAlgError) as exc:
        return ReplicateRecord(index, seed, p, error=f"{type(exc).__name__}: {exc}")


def run_replicates(
    lab: LabeledSet,
    field_set: LabeledSet,
    params: smoter.SmoteParams,
    reps: int = 100,
    master_seed: int = 0,
    cfg: PreprocessConfig = PreprocessConfig(),
    p_range=DEFAULT_P_RANGE,
    workers: int = 1,
) -> list[ReplicateRecord]:
    """Run ``reps`` independent replicates; ``params.seed`` is ignored.

    Failing replicates are kept as records with ``error`` set. The batch
    raises only if every replicate fails.
    """
    if reps < 1:
        raise DataError(f"reps must be >= 1, got {reps}")
    assert_same_grid(lab, field_set)
    lab_pre = run_pipeline(lab, cfg)
    field_pre = run_pipeline(field_set, cfg)
    job = partial(
        _replicate,
        lab=lab, field_set=field_set, params=params, cfg=cfg, p_range=p_range,
        master_seed=master_seed, lab_pre=lab_pre, field_pre=field_pre,
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(job, range(reps), chunksize=max(1, reps // (4 * workers))))
    else:
        records = [job(i) for i in range(reps)]
    records.sort(key=lambda r: r.replicate_index)
    if not any(r.ok for r in records):
        raise NumericalError(f"all {reps} replicates failed; first error: {records[0].error}")
    return records


AGGREGATE_FIELDS = ("best_p", "cal_rmse", "cal_r2", "cal_me", "val_rmse", "val_r2", "val_me")


def record_values(r: ReplicateRecord) -> dict:
    return {
        "best_p": float(r.best_p),
        "cal_rmse": r.calibration.rmse,
        "cal_r2": r.calibration.r2,
        "cal_me": r.calibration.me,
        "val_rmse": r.validation.rmse,
        "val_r2": r.validation.r2,
        "val_me": r.validation.me,
    }


@dataclass(frozen=True)
class AggregateReport:
    """Median and quartiles (``(median, q25, q75)``) per field."""

    stats: dict
    n_replicates: int
    n_failed: int

    def __getitem__(self, name):
        return self.stats[name]


def aggregate(records) -> AggregateReport:
    """Quartiles use linear interpolation between order statistics (type 7)."""
    records = list(records)
    good = [r for r in records if r.ok]
    if not good:
        raise DataError("no successful replicates to aggregate")
    table = np.array([[record_values(r)[f] for f in AGGREGATE_FIELDS] for r in good])
    q = np.quantile(table, [0.5, 0.25, 0.75], axis=0, method="linear")
    stats = {f: (float(q[0, j]), float(q[1, j]), float(q[2, j])) for j, f in enumerate(AGGREGATE_FIELDS)}
    return AggregateReport(stats, len(good), len(records) - len(good))


def pick_representative(records) -> ReplicateRecord:
    """The replicate with the median component count and the best validation R^2.

    A non-integer median snaps to the nearest attained count (lower on a
    tie); R^2 ties go to the smallest replicate index.
    """
    good = [r for r in records if r.ok]
    if not good:
        raise DataError("no successful replicates")
    ps = np.array([r.best_p for r in good])
    med = float(np.median(ps))
    attained = np.unique(ps)
    target = int(min(attained, key=lambda v: (abs(v - med), v)))
    pool = [r for r in good if r.best_p == target]
    return min(pool, key=lambda r: (-r.validation.r2, r.replicate_index))
