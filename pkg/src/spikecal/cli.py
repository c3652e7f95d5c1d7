"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 data or validation
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import montecarlo, pca, pls, report, smoter
from .benchmark import BenchmarkConfig, make_benchmark
from .config import parse_config
from .errors import ConfigError, DataError, NumericalError
from .preprocess import run_pipeline
from .selection import evaluate, select_components
from .spectra import (
    LabeledSet,
    WavelengthGrid,
    assert_same_grid,
    concat,
    load_labeled_csv,
    load_spectra_csv,
    write_labeled_csv,
    write_spectra_csv,
)

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _is_labeled(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh), [])
    return len(header) > 1 and header[1].strip() == "target"


def _load(path, cfg, tag=""):
    pct = cfg["data.reflectance_percent"]
    if _is_labeled(path):
        return load_labeled_csv(path, tag, reflectance_percent=pct)
    return load_spectra_csv(path, tag, reflectance_percent=pct)


def _write(data, path):
    if isinstance(data, LabeledSet):
        write_labeled_csv(data, path)
    else:
        write_spectra_csv(data, path)


def _write_metrics(rows, path):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["split", "p", "rmse", "r2", "me", "n"])
        for split, p, m in rows:
            w.writerow([split, p, repr(m.rmse), repr(m.r2), repr(m.me), m.n])
            print(f"{split}: p={p} rmse={m.rmse:.4f} r2={m.r2:.4f} me={m.me:.4f} n={m.n}")


def _scores_table(cfg, lab, field_set, synthetic=()):
    """PCA on raw spectra (L, or L and F jointly); other sets are projected."""
    fit_sets = [lab] if cfg["pca.fit_on"] == "L" else [lab, field_set]
    X_fit = np.vstack([s.X for s in fit_sets])
    c = min(cfg["pca.components"], X_fit.shape[0] - 1, X_fit.shape[1])
    model = pca.fit_pca(X_fit, c)
    sets = [lab, field_set, *synthetic]
    ids = [i for s in sets for i in s.ids]
    tags = [s.tag for s in sets for _ in s.ids]
    targets = np.concatenate([s.targets for s in sets])
    scores = pca.project(model, np.vstack([s.X for s in sets]))
    ratios = ", ".join(f"{r:.3f}" for r in model.explained_variance_ratio)
    print(f"PCA explained variance ratios: {ratios}")
    return ids, tags, targets, scores


def cmd_preprocess(args, cfg, out):
    pre = cfg.preprocess
    for path in args.input:
        data = _load(path, cfg)
        result = run_pipeline(data, pre)
        dest = Path(args.output) if args.output and len(args.input) == 1 else out / f"{Path(path).stem}_pre.csv"
        _write(result, dest)
        print(f"{path} -> {dest} ({len(result)} spectra, grid {result.grid})")


def cmd_smote(args, cfg, out):
    source = load_labeled_csv(args.input, "F", cfg["data.reflectance_percent"])
    synthetic = smoter.generate_set(source, cfg.smote)
    dest = Path(args.output) if args.output else out / "synthetic.csv"
    write_labeled_csv(synthetic, dest)
    print(f"{len(synthetic)} synthetic samples -> {dest}")


def cmd_pca(args, cfg, out):
    cfg.check_inputs("data.lab", "data.field")
    pct = cfg["data.reflectance_percent"]
    lab = load_labeled_csv(cfg["data.lab"], "L", pct)
    field_set = load_labeled_csv(cfg["data.field"], "F", pct)
    synthetic = [load_labeled_csv(p, "S", pct) for p in args.synthetic]
    for s in (field_set, *synthetic):
        assert_same_grid(lab, s)
    report.write_scores(*_scores_table(cfg, lab, field_set, synthetic), out / "scores.csv")


def cmd_train(args, cfg, out):
    cal = concat([load_labeled_csv(p, "") for p in args.input], tag="cal")
    if args.components == "auto":
        sel = select_components(cal.X, cal.targets, cfg.p_range)
        report.write_aicc(sel, out / "aicc_by_p.csv")
        p = sel.best_p
        cv = sel.loocv_predictions_best
    else:
        try:
            p = int(args.components)
        except ValueError:
            raise ConfigError(f"--components must be 'auto' or an integer, got {args.components!r}") from None
        sel = select_components(cal.X, cal.targets, [p])
        cv = sel.loocv_predictions_best
    model = pls.fit(cal.X, cal.targets, p, wavelengths=cal.grid.wavelengths)
    pls.save_model(model, out / "model.csv")
    _write_metrics([("loocv", p, evaluate(cv, cal.targets))], out / "train_metrics.csv")


def cmd_validate(args, cfg, out):
    model = pls.load_model(args.model)
    data = _load(args.input, cfg)
    if model.wavelengths is not None and not np.array_equal(model.wavelengths, data.grid.wavelengths):
        raise DataError(f"model grid does not match {args.input} grid {data.grid}")
    yhat = pls.predict(model, data.X)
    with (out / "validation_predictions.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if isinstance(data, LabeledSet):
            w.writerow(["id", "measured", "predicted"])
            w.writerows([i, repr(float(y)), repr(float(v))] for i, y, v in zip(data.ids, data.targets, yhat))
        else:
            w.writerow(["id", "predicted"])
            w.writerows([i, repr(float(v))] for i, v in zip(data.ids, yhat))
    if isinstance(data, LabeledSet):
        _write_metrics([("validation", model.n_components, evaluate(yhat, data.targets))],
                       out / "validation_metrics.csv")


def cmd_mc(args, cfg, out):
    cfg.check_inputs("data.lab", "data.field")
    pct = cfg["data.reflectance_percent"]
    lab = load_labeled_csv(cfg["data.lab"], "L", pct)
    field_set = load_labeled_csv(cfg["data.field"], "F", pct)
    pre = cfg.preprocess
    params = cfg.smote
    records = montecarlo.run_replicates(
        lab, field_set, params, reps=cfg["mc.reps"], master_seed=cfg["seed"],
        cfg=pre, p_range=cfg.p_range, workers=cfg["mc.workers"],
    )
    baseline = montecarlo.run_baseline(lab, field_set, pre, cfg.p_range)
    agg = montecarlo.aggregate(records)
    rep = montecarlo.pick_representative(records)
    synthetic = smoter.generate_set(field_set, rep.smote_params)
    scores = _scores_table(cfg, lab, field_set, [synthetic])
    label = args.label or f"N{params.n_percent}_k{params.k}"
    report.emit_report(out, records, agg, rep, field_set.targets, scores, label=label, baseline=baseline)
    med = agg["val_rmse"]
    print(
        f"{agg.n_replicates} replicates ({agg.n_failed} failed); validation RMSE median {med[0]:.4f} "
        f"({med[1]:.4f}; {med[2]:.4f}); unspiked {baseline.validation.rmse:.4f}; "
        f"representative replicate {rep.replicate_index}"
    )


def cmd_report(args, cfg, out):
    rows = []
    for item in args.replicates:
        path, _, label = item.partition(":")
        records = report.read_replicates(path)
        params = next((r.smote_params for r in records if r.smote_params), None)
        rows.append((label or Path(path).parent.name or Path(path).stem, params, montecarlo.aggregate(records)))
    report.write_aggregate(rows, out / "aggregate.csv")
    print(f"{len(rows)} aggregate rows -> {out / 'aggregate.csv'}")


def cmd_benchmark(args, cfg, out):
    bcfg = BenchmarkConfig(grid=WavelengthGrid(350, 2500, args.step))
    lab, field_set = make_benchmark(cfg["seed"], bcfg)
    write_labeled_csv(lab, out / "lab.csv")
    write_labeled_csv(field_set, out / "field.csv")
    print(f"benchmark data -> {out / 'lab.csv'}, {out / 'field.csv'}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="RNG seed (SMOTE seed or Monte Carlo master seed)")
    common.add_argument("--reflectance-percent", action="store_const", const="true", default=None,
                        help="input reflectance is in percent; divide by 100")

    stages = argparse.ArgumentParser(add_help=False)
    for stage in ("offset", "trim", "absorbance", "ssa", "normalize", "derivative"):
        stages.add_argument(f"--no-{stage}", dest=f"preprocess.{stage}", action="store_const",
                            const="false", default=None, help=f"skip the {stage} stage")
    stages.add_argument("--ssa-window", dest="ssa.window_len", type=int)
    stages.add_argument("--ssa-rank", dest="ssa.rank", type=int)

    smote_opts = argparse.ArgumentParser(add_help=False)
    smote_opts.add_argument("--n", dest="smote.n", type=int, help="amount of SMOTE in percent")
    smote_opts.add_argument("--k", dest="smote.k", type=int, help="number of nearest neighbours")

    data_opts = argparse.ArgumentParser(add_help=False)
    data_opts.add_argument("--lab", dest="data.lab", help="labeled laboratory calibration CSV")
    data_opts.add_argument("--field", dest="data.field", help="labeled field validation CSV")

    parser = _Parser(prog="spikecal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("preprocess", parents=[common, stages], help="run the pretreatment chain")
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("smote", parents=[common, smote_opts], help="generate synthetic samples")
    p.add_argument("--input", required=True, help="raw labeled source (field) CSV")
    p.add_argument("--output")
    p.set_defaults(func=cmd_smote)

    p = sub.add_parser("pca", parents=[common, data_opts], help="PCA scores of raw spectra")
    p.add_argument("--synthetic", nargs="*", default=[])
    p.add_argument("--components", dest="pca.components", type=int)
    p.add_argument("--fit-on", dest="pca.fit_on", choices=["L", "LF"])
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("train", parents=[common], help="fit PLS on pretreated calibration CSVs")
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--components", default="auto", help="'auto' (AICc) or a fixed count")
    p.add_argument("--p-max", dest="select.p_max", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("validate", parents=[common], help="predict with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mc", parents=[common, stages, smote_opts, data_opts], help="Monte Carlo batch")
    p.add_argument("--reps", dest="mc.reps", type=int)
    p.add_argument("--workers", dest="mc.workers", type=int)
    p.add_argument("--label")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("report", parents=[common], help="aggregate replicate tables")
    p.add_argument("--replicates", nargs="+", required=True, metavar="PATH[:LABEL]")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("benchmark", parents=[common], help="write the synthetic benchmark datasets")
    p.add_argument("--step", type=int, default=10, help="grid step in nm")
    p.set_defaults(func=cmd_benchmark)
    return parser


_NON_CONFIG = {"command", "func", "config", "input", "output", "synthetic", "components", "model",
               "label", "replicates", "step"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG and "." in k}
    overrides.update(out=args.out, seed=args.seed, **{"data.reflectance_percent": args.reflectance_percent})
    try:
        cfg = parse_config(args.config, overrides)
        out = Path(cfg["out"])
        out.mkdir(parents=True, exist_ok=True)
        (out / "effective_config.txt").write_text(cfg.dump(), encoding="utf-8")
        args.func(args, cfg, out)
    except ConfigError as exc:
        print(f"spikecal: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"spikecal: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"spikecal: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
