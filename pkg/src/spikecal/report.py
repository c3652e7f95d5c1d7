"""CSV reports: replicate tables, aggregate tables, predictions and PCA scores."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import DataError
from .montecarlo import AGGREGATE_FIELDS, AggregateReport, ReplicateRecord, aggregate
from .selection import MetricsReport
from .smoter import SmoteParams

__all__ = [
    "REPLICATE_COLUMNS",
    "AGGREGATE_COLUMNS",
    "PREDICTION_COLUMNS",
    "write_replicates",
    "read_replicates",
    "write_aggregate",
    "write_predictions",
    "write_scores",
    "write_aicc",
    "emit_report",
]

REPLICATE_COLUMNS = [
    "replicate_index", "seed", "N", "k", "n_synthetic", "best_p",
    "cal_rmse", "cal_r2", "cal_me", "cal_n",
    "val_rmse", "val_r2", "val_me", "val_n", "error",
]

_AGG_NAMES = {"best_p": "p", **{f: f for f in AGGREGATE_FIELDS if f != "best_p"}}
AGGREGATE_COLUMNS = ["model", "N", "k"] + [
    f"{_AGG_NAMES[f]}_{stat}" for f in AGGREGATE_FIELDS for stat in ("median", "q25", "q75")
] + ["replicates", "failed"]

PREDICTION_COLUMNS = ["id", "measured", "predicted", "split"]


def _num(x):
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _open(path):
    try:
        return Path(path).open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


def write_replicates(records, path) -> None:
    with _open(path) as fh:
        w = _writer(fh)
        w.writerow(REPLICATE_COLUMNS)
        for r in records:
            p = r.smote_params
            row = [r.replicate_index, _num(r.seed), p.n_percent if p else "", p.k if p else "",
                   r.n_synthetic, _num(r.best_p)]
            for m in (r.calibration, r.validation):
                row += [_num(m.rmse), _num(m.r2), _num(m.me), m.n] if m else ["", "", "", ""]
            row.append(r.error or "")
            w.writerow(row)


def read_replicates(path) -> list[ReplicateRecord]:
    """Reload metric columns of a replicates table (predictions are not stored)."""
    out = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != REPLICATE_COLUMNS:
            raise DataError(f"{path}: unexpected replicate table header")
        for rec in reader:
            params = None
            if rec["N"]:
                params = SmoteParams(int(rec["N"]), int(rec["k"]), int(rec["seed"]))
            if rec["error"]:
                out.append(ReplicateRecord(int(rec["replicate_index"]), int(rec["seed"] or 0), params,
                                           error=rec["error"]))
                continue
            cal, val = (
                MetricsReport(float(rec[f"{s}_rmse"]), float(rec[f"{s}_me"]), float(rec[f"{s}_r2"]),
                              int(rec[f"{s}_n"]))
                for s in ("cal", "val")
            )
            out.append(ReplicateRecord(
                int(rec["replicate_index"]), int(rec["seed"]) if rec["seed"] else None, params,
                best_p=int(rec["best_p"]), calibration=cal, validation=val,
                n_synthetic=int(rec["n_synthetic"]),
            ))
    return out


def aggregate_row(label, params: SmoteParams | None, agg: AggregateReport) -> list:
    row = [label, params.n_percent if params else "", params.k if params else ""]
    for f in AGGREGATE_FIELDS:
        row += [_num(v) for v in agg[f]]
    return row + [agg.n_replicates, agg.n_failed]


def write_aggregate(rows, path) -> None:
    """``rows`` are ``(label, SmoteParams or None, AggregateReport)`` triples."""
    with _open(path) as fh:
        w = _writer(fh)
        w.writerow(AGGREGATE_COLUMNS)
        for label, params, agg in rows:
            w.writerow(aggregate_row(label, params, agg))


def prediction_rows(record: ReplicateRecord, field_targets):
    rows = []
    n_lab = len(record.calibration_ids) - record.n_synthetic  # synthetic rows are appended last
    for j, (i, y, yhat) in enumerate(
        zip(record.calibration_ids, record.calibration_measured, record.calibration_predicted)
    ):
        rows.append([i, _num(y), _num(yhat), "cv_lab" if j < n_lab else "cv_synthetic"])
    for i, y, yhat in zip(record.validation_ids, field_targets, record.validation_predicted):
        rows.append([i, _num(y), _num(yhat), "validation"])
    return rows


def write_predictions(record: ReplicateRecord, field_targets, path) -> None:
    """LOOCV predictions on the calibration set followed by field validation."""
    if record.calibration_predicted is None:
        raise DataError(f"replicate {record.replicate_index} carries no predictions")
    with _open(path) as fh:
        w = _writer(fh)
        w.writerow(PREDICTION_COLUMNS)
        w.writerows(prediction_rows(record, field_targets))


def write_scores(ids, tags, targets, scores, path) -> None:
    scores = np.atleast_2d(scores)
    with _open(path) as fh:
        w = _writer(fh)
        w.writerow(["id", "dataset_tag", "target", *[f"pc{j + 1}" for j in range(scores.shape[1])]])
        for i, tag, t, row in zip(ids, tags, targets, scores):
            w.writerow([i, tag, _num(t), *map(_num, row)])


def write_aicc(selection, path) -> None:
    with _open(path) as fh:
        w = _writer(fh)
        w.writerow(["p", "rmse_cv", "aicc"])
        for p in sorted(selection.aicc_by_p):
            w.writerow([p, _num(selection.rmse_by_p[p]), _num(selection.aicc_by_p[p])])


def emit_report(out_dir, records, agg, representative, field_targets, scores_table, label="spiked", baseline=None):
    """Write the four report files into ``out_dir``.

    ``scores_table`` is ``(ids, tags, targets, scores)`` from the PCA step.
    When a ``baseline`` record is given it becomes the first aggregate row
    and its predictions are written to ``predictions_baseline.csv``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = next((r.smote_params for r in records if r.smote_params), None)
    rows = [(label, params, agg)]
    if baseline is not None:
        rows.insert(0, ("unspiked", None, aggregate([baseline])))
    write_aggregate(rows, out / "aggregate.csv")
    write_replicates(records, out / "replicates.csv")
    write_predictions(representative, field_targets, out / "predictions_representative.csv")
    write_scores(*scores_table, out / "scores.csv")
    if baseline is not None:
        write_predictions(baseline, field_targets, out / "predictions_baseline.csv")
