"""Command-line interface: ``fairband synth | train | sweep | band | audit | scarce | delta-trend``.

Settings come from an optional YAML file (``--config``) and are overridden
by command flags. Exit codes: 0 success, 2 usage or configuration error,
3 data error, 4 numeric failure.
"""

from __future__ import annotations

import contextlib
import copy
import csv
import json
import warnings
from pathlib import Path

import click
import numpy as np
import yaml

from .ci_mean import CiMethod, Method
from .data import (MISSING, CsvSchema, DataError, Dataset, Standardizer, SyntheticConfig,
                   generate_synthetic, load_csv, write_csv)
from .metrics import FairnessMetric, SurrogateKind, UndefinedStratumError, violation
from .model import (TrainConfig, evaluate_point, load_model, predictions_grid, save_model, sweep,
                    train_separate_with_history, train_yoto_with_history)
from .scarce import ScarcePartition, scarce_report
from .svg import render_band
from .tradeoff import (BandOptions, DeltaTrendConfig, Region, TradeoffBand, audit_baseline, build_band,
                       delta_trend, sensitivity_delta)

DEFAULTS = {
    "data": {
        "source": "synthetic",
        "path": None,
        "n": 5000,
        "synthetic": {"group_prob": 0.5, "group_means": [0.0, 1.0], "noise_sd": 0.2,
                      "label_flip_keep": 0.9, "label_threshold": 0.5},
        "schema": {"features": None, "label": "y", "sensitive": "a", "categorical": []},
    },
    "metric": "dp",
    "surrogate": "sigmoid_abs",
    "train": {"lambda_low": 1e-6, "lambda_high": 10.0, "learning_rate": 0.01, "max_epochs": 1000,
              "batch_size": 256, "patience": 50, "n_val_lambdas": 5, "optimizer": "adam",
              "val_fraction": 0.2},
    "ci": {"method": "hoeffding", "alpha": 0.05, "construction": "subsample", "n_resamples": 1000,
           "variance": "plugin", "bound": 1.0},
    "lambdas": {"low": 1e-6, "high": 10.0, "n": 50},
    "seed": 0,
}

METRICS = click.Choice([m.value for m in FairnessMetric])
METHODS = click.Choice([m.value for m in Method])


class DataFailure(click.ClickException):
    exit_code = 3


class NumericFailure(click.ClickException):
    exit_code = 4


class ConfigFailure(click.ClickException):
    exit_code = 2


@contextlib.contextmanager
def _exit_codes():
    try:
        yield
    except (DataError, UndefinedStratumError, csv.Error) as exc:
        raise DataFailure(str(exc)) from exc
    except FileNotFoundError as exc:
        raise DataFailure(f"file not found: {exc.filename}") from exc
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        raise NumericFailure(str(exc)) from exc
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigFailure(str(exc)) from exc


def _merge(base: dict, extra: dict, where: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if key not in base:
            raise ConfigFailure(f"unknown config key {where + key!r}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            out[key] = _merge(base[key], value, f"{where}{key}.")
        else:
            out[key] = value
    return out


def load_config(path) -> dict:
    """Defaults merged with the YAML document at ``path`` (if given)."""
    if path is None:
        return copy.deepcopy(DEFAULTS)
    try:
        doc = yaml.safe_load(Path(path).read_text()) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigFailure(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigFailure("config must be a mapping")
    cfg = _merge(DEFAULTS, doc)
    _validate(cfg)
    return cfg


def _validate(cfg: dict):
    if not 0 < float(cfg["ci"]["alpha"]) < 1:
        raise ConfigFailure("ci.alpha must lie in (0, 1)")
    source = cfg["data"]["source"]
    if source not in ("synthetic", "csv"):
        raise ConfigFailure("data.source must be 'synthetic' or 'csv'")
    if source == "csv" and not cfg["data"]["path"]:
        raise ConfigFailure("data.source 'csv' needs data.path")
    if source == "synthetic" and cfg["data"]["path"]:
        raise ConfigFailure("give exactly one dataset source: data.path is set but data.source is 'synthetic'")
    if cfg["data"]["path"] and not Path(cfg["data"]["path"]).exists():
        raise ConfigFailure(f"data.path {cfg['data']['path']} does not exist")
    FairnessMetric(cfg["metric"])
    SurrogateKind(cfg["surrogate"])
    Method(cfg["ci"]["method"])


def _set(cfg: dict, dotted: str, value):
    if value is None:
        return
    node = cfg
    *head, last = dotted.split(".")
    for k in head:
        node = node[k]
    node[last] = value


def _effective(ctx, **overrides) -> dict:
    cfg = copy.deepcopy(ctx.obj["config"])
    for key, value in overrides.items():
        _set(cfg, key.replace("__", "."), value)
    with _exit_codes():
        _validate(cfg)
    return cfg


def _synthetic_config(cfg: dict, seed: int) -> SyntheticConfig:
    s = cfg["data"]["synthetic"]
    return SyntheticConfig(group_prob=s["group_prob"], group_means=tuple(s["group_means"]),
                           noise_sd=s["noise_sd"], label_flip_keep=s["label_flip_keep"],
                           label_threshold=s["label_threshold"], seed=seed)


def _schema(cfg: dict, path, require_sensitive: bool = True) -> CsvSchema:
    sc = cfg["data"]["schema"]
    features = sc["features"]
    if features is None:
        with Path(path).open(newline="", encoding="utf-8") as fh:
            header = next(csv.reader(fh), None)
        if not header:
            raise DataError(f"{path}: missing header row")
        header = [h.strip() for h in header]
        if require_sensitive and sc["sensitive"] not in header:
            raise DataError(f"{path}: sensitive column {sc['sensitive']!r} (schema field 'sensitive') not found")
        features = [h for h in header if h not in (sc["label"], sc["sensitive"])]
    elif isinstance(features, str):
        features = [f.strip() for f in features.split(",") if f.strip()]
    return CsvSchema(list(features), sc["label"], sc["sensitive"], list(sc["categorical"]))


def _align(data: Dataset, doc: dict) -> Dataset:
    """Order columns as the model expects and apply its stored standardizer."""
    names = doc.get("feature_names")
    if names and list(names) != list(data.feature_names):
        unknown = set(data.feature_names) - set(names)
        if unknown:
            raise DataError(f"columns not seen in training: {sorted(unknown)}")
        pos = {n: i for i, n in enumerate(data.feature_names)}
        X = np.column_stack([data.X[:, pos[n]] if n in pos else np.zeros(len(data)) for n in names])
        data = Dataset(X, data.a, data.y, list(names))
    st = doc.get("standardizer")
    if st:
        data = Standardizer(st["mean"]["data"], st["scale"]["data"]).apply(data)
    return data


def _load_for_model(cfg, path, doc) -> Dataset:
    return _align(load_csv(path, _schema(cfg, path)), doc)


def _grid(cfg) -> np.ndarray:
    g = cfg["lambdas"]
    return np.logspace(np.log10(float(g["low"])), np.log10(float(g["high"])), int(g["n"]))


def _predictions(model, doc, lambdas, X) -> np.ndarray:
    if doc["kind"] == "separate":
        return (model.base_logit(X) > 0).astype(np.int64)[:, None]
    return predictions_grid(model, lambdas, X)


def _read_columns(path, columns) -> dict:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        reader.fieldnames = header
        missing = [c for c in columns if c not in header]
        if missing:
            raise DataError(f"{path}: missing column(s) {missing}")
        rows = list(reader)
    out = {}
    for c in columns:
        vals = []
        for i, r in enumerate(rows, start=1):
            cell = (r[c] or "").strip()
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {i}: column {c!r} value {cell!r} is not numeric") from None
            if v not in (0.0, 1.0):
                raise DataError(f"{path}: row {i}: column {c!r} value {cell!r} is not binary")
            vals.append(int(v))
        out[c] = np.array(vals, dtype=np.int64)
    return out


def _write_rows(path, header, rows):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="YAML run configuration; command flags override it.")
@click.pass_context
def cli(ctx, config_path):
    """Confidence bands on accuracy-fairness trade-offs."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = load_config(config_path)


@cli.command()
@click.option("--n", type=int, default=None, help="Number of rows.")
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--group-prob", type=float, default=None)
@click.option("--noise-sd", type=float, default=None)
@click.option("--label-keep", type=float, default=None, help="Probability a label is not flipped.")
@click.pass_context
def synth(ctx, n, seed, out, group_prob, noise_sd, label_keep):
    """Write a synthetic dataset (x, a, y) as CSV."""
    cfg = _effective(ctx, data__n=n, seed=seed, data__synthetic__group_prob=group_prob,
                     data__synthetic__noise_sd=noise_sd, data__synthetic__label_flip_keep=label_keep)
    n = int(cfg["data"]["n"])
    if n <= 0:
        raise click.UsageError("--n must be positive")
    with _exit_codes():
        data = generate_synthetic(_synthetic_config(cfg, int(cfg["seed"])), n)
        try:
            write_csv(data, out)
        except OSError as exc:
            raise ConfigFailure(f"cannot write {out}: {exc.strerror}") from exc
    click.echo(f"wrote {n} rows to {out}: P(a=1)={data.a.mean():.4f} P(y=1)={data.y.mean():.4f} "
               f"mean x={data.X[:, 0].mean():.4f}")


@cli.command()
@click.option("--data", "data_path", type=click.Path(dir_okay=False), default=None, help="Training CSV.")
@click.option("--val", "val_path", type=click.Path(dir_okay=False), default=None, help="Validation CSV.")
@click.option("--mode", type=click.Choice(["yoto", "separate"]), default="yoto")
@click.option("--lam", type=float, default=None, help="Fixed lambda (separate mode only, required there).")
@click.option("--metric", type=METRICS, default=None)
@click.option("--surrogate", type=click.Choice([s.value for s in SurrogateKind]), default=None)
@click.option("--epochs", type=int, default=None)
@click.option("--lr", type=float, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--patience", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Model JSON.")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), default=None,
              help="Per-epoch loss CSV (default: <out>.epochs.csv).")
@click.pass_context
def train(ctx, data_path, val_path, mode, lam, metric, surrogate, epochs, lr, batch_size, patience,
          seed, out, log_path):
    """Train a YOTO model or a separate fixed-lambda model."""
    if mode == "separate" and lam is None:
        raise click.UsageError("separate mode requires --lam")
    if mode == "yoto" and lam is not None:
        raise click.UsageError("--lam applies to separate mode only")
    cfg = _effective(ctx, metric=metric, surrogate=surrogate, train__max_epochs=epochs,
                     train__learning_rate=lr, train__batch_size=batch_size, train__patience=patience,
                     seed=seed)
    if data_path:
        cfg["data"]["source"], cfg["data"]["path"] = "csv", data_path
    with _exit_codes():
        if cfg["data"]["source"] == "csv":
            full = load_csv(cfg["data"]["path"], _schema(cfg, cfg["data"]["path"]))
        else:
            full = generate_synthetic(_synthetic_config(cfg, int(cfg["seed"])), int(cfg["data"]["n"]))
        full.require_attribute("training")
        if val_path:
            tr, va = full, load_csv(val_path, _schema(cfg, val_path))
        else:
            perm = np.random.default_rng([int(cfg["seed"]), 7]).permutation(len(full))
            n_val = max(1, int(round(float(cfg["train"]["val_fraction"]) * len(full))))
            tr, va = full.subset(perm[n_val:]), full.subset(perm[:n_val])
        st = Standardizer().fit(tr.X)
        tr, va = st.apply(tr), st.apply(va)
        t = cfg["train"]
        tc = TrainConfig(lambda_low=t["lambda_low"], lambda_high=t["lambda_high"],
                         learning_rate=t["learning_rate"], max_epochs=t["max_epochs"],
                         batch_size=t["batch_size"], patience=t["patience"], seed=int(cfg["seed"]),
                         surrogate=cfg["surrogate"], metric=cfg["metric"], n_val_lambdas=t["n_val_lambdas"],
                         optimizer=t["optimizer"])
        if mode == "yoto":
            result = train_yoto_with_history(tr, va, tc)
        else:
            result = train_separate_with_history(tr, va, lam, tc)
        save_model(out, result.model, config=tc, standardizer=st,
                   extra={"feature_names": list(full.feature_names), "best_epoch": result.best_epoch,
                          "run_config": cfg})
    log_path = log_path or str(out) + ".epochs.csv"
    _write_rows(log_path, ["epoch", "train_loss", "val_loss"],
                [[h["epoch"], repr(h["train_loss"]), repr(h["val_loss"])] for h in result.history])
    click.echo(f"trained {mode} model on {len(tr)} rows ({len(result.history)} epochs, "
               f"best epoch {result.best_epoch}); wrote {out} and {log_path}")


@cli.command("sweep")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--data", "data_path", type=click.Path(dir_okay=False), required=True)
@click.option("--metric", type=METRICS, default=None)
@click.option("--n-lambdas", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--export-predictions", type=click.Path(file_okay=False), default=None,
              help="Directory for one (prediction, a, y) CSV per lambda.")
@click.pass_context
def sweep_cmd(ctx, model_path, data_path, metric, n_lambdas, out, export_predictions):
    """Evaluate accuracy and violation along a lambda grid."""
    cfg = _effective(ctx, metric=metric, lambdas__n=n_lambdas)
    with _exit_codes():
        model, doc = load_model(model_path)
        data = _load_for_model(cfg, data_path, doc)
        grid = _grid(cfg)
        if doc["kind"] == "separate":
            points = [evaluate_point(model, data, cfg["metric"])]
        else:
            points = sweep(model, grid, data, cfg["metric"])
        _write_rows(out, ["lambda", "accuracy", "violation"],
                    [["" if p.lam is None else repr(p.lam), repr(p.accuracy), repr(p.violation)] for p in points])
        if export_predictions:
            d = Path(export_predictions)
            d.mkdir(parents=True, exist_ok=True)
            P = _predictions(model, doc, grid, data.X)
            for j in range(P.shape[1]):
                _write_rows(d / f"pred_{j:03d}.csv", ["prediction", "a", "y"],
                            zip(P[:, j].tolist(), data.a.tolist(), data.y.tolist()))
    for p in points:
        lam = "-" if p.lam is None else f"{p.lam:.3g}"
        click.echo(f"lambda={lam:>9} accuracy={p.accuracy:.4f} violation={p.violation:.4f}")


def _comparison_points(cfg, path, cal_cache):
    model, doc = load_model(path)
    data = _load_for_model(cfg, cal_cache["path"], doc)
    if doc["kind"] == "separate":
        return [evaluate_point(model, data, cfg["metric"])]
    return sweep(model, _grid(cfg), data, cfg["metric"])


@cli.command()
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--cal", "cal_path", type=click.Path(dir_okay=False), required=True)
@click.option("--method", "methods", type=METHODS, multiple=True, help="Repeat for several bands.")
@click.option("--alpha", type=float, default=None)
@click.option("--metric", type=METRICS, default=None)
@click.option("--construction", type=click.Choice(["union", "subsample"]), default=None)
@click.option("--n-resamples", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--compare", "compare", type=click.Path(exists=True, dir_okay=False), multiple=True,
              help="Separately trained model files for the sensitivity analysis.")
@click.option("--baseline", "baselines", type=click.Path(exists=True, dir_okay=False), multiple=True,
              help="Baseline prediction CSVs to draw on the plot.")
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--svg/--no-svg", default=True)
@click.pass_context
def band(ctx, model_path, cal_path, methods, alpha, metric, construction, n_resamples, seed, compare,
         baselines, out_dir, svg):
    """Build confidence bands on the optimal trade-off from calibration data."""
    cfg = _effective(ctx, ci__alpha=alpha, metric=metric, ci__construction=construction,
                     ci__n_resamples=n_resamples, seed=seed)
    methods = list(methods) or [cfg["ci"]["method"]]
    out = Path(out_dir)
    with _exit_codes():
        model, doc = load_model(model_path)
        if doc["kind"] != "yoto":
            raise click.UsageError("--model must be a YOTO model file")
        cal = _load_for_model(cfg, cal_path, doc)
        grid = _grid(cfg)
        metric = cfg["metric"]
        if compare:
            report = sensitivity_delta(sweep(model, grid, cal, metric),
                                       [(str(p), _comparison_points(cfg, p, {"path": cal_path})) for p in compare])
            delta, contributing = report.delta_hat, report.contributing_models
        else:
            click.echo("warning: no --compare models; lower band assumes the YOTO model is optimal (delta = 0)",
                       err=True)
            delta, contributing = 0.0, []
        points = []
        for path in baselines:
            cols = _read_columns(path, ["prediction", "a", "y"])
            points.append((Path(path).stem, float(np.mean(cols["prediction"] == cols["y"])),
                           float(violation(metric, cols["prediction"], cols["a"], cols["y"]))))
        out.mkdir(parents=True, exist_ok=True)
        seed_ = int(cfg["seed"])
        for name in methods:
            ci = cfg["ci"]
            method = CiMethod(name, bound=ci["bound"], variance=ci["variance"],
                              n_resamples=int(ci["n_resamples"]), seed=seed_)
            opts = BandOptions(method, ci["construction"], seed_)
            meta = {"model": str(model_path), "cal": str(cal_path), "compare": [str(p) for p in compare],
                    "contributing_models": contributing, "seeds": {"ci": seed_, "bootstrap": seed_},
                    "lambda_grid": [float(v) for v in grid], "config": cfg}
            b = build_band(model, grid, cal, metric, float(ci["alpha"]), delta, opts, meta=meta)
            b.to_csv(out / f"band_{name}.csv")
            if svg:
                render_band(b, out / f"band_{name}.svg", title=f"{metric.upper()} band ({name})", points=points)
            click.echo(f"{name}: wrote {out / f'band_{name}.csv'} (delta_used={delta:.4f}, {len(b.psi)} grid points)")


@cli.command()
@click.option("--band", "bands", type=click.Path(exists=True, dir_okay=False), multiple=True, required=True)
@click.option("--baseline", "baselines", type=click.Path(exists=True, dir_okay=False), multiple=True)
@click.option("--alpha", type=float, default=None, help="Defaults to each band's alpha.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Verdict CSV.")
@click.pass_context
def audit(ctx, bands, baselines, alpha, out):
    """Place baseline models relative to one or more bands."""
    cfg = _effective(ctx)
    header = ["band", "baseline", "accuracy", "violation", "region", "best_acc", "best_fair",
              "worst_acc", "worst_fair", "verdict", "confidence"]
    rows = []
    with _exit_codes():
        for band_path in bands:
            b = TradeoffBand.from_csv(band_path)
            a_ = b.alpha if alpha is None else alpha
            metric = b.meta.get("metric", cfg["metric"])
            method = CiMethod(b.meta.get("method", cfg["ci"]["method"]),
                              n_resamples=int(b.meta.get("n_resamples", cfg["ci"]["n_resamples"])),
                              seed=int(b.meta.get("bootstrap_seed", cfg["seed"])))
            opts = BandOptions(method, b.meta.get("construction", cfg["ci"]["construction"]),
                               int(b.meta.get("seed", cfg["seed"])))
            for path in baselines:
                cols = _read_columns(path, ["prediction", "a", "y"])
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    res = audit_baseline(cols["prediction"], cols["a"], cols["y"], a_, b, metric, opts)
                cr = res.confidence_region
                rows.append([Path(band_path).name, Path(path).name, f"{cr.plug_in[0]:.6f}", f"{cr.plug_in[1]:.6f}",
                             res.region.value, f"{cr.best_case[0]:.6f}", f"{cr.best_case[1]:.6f}",
                             f"{cr.worst_case[0]:.6f}", f"{cr.worst_case[1]:.6f}", res.verdict.value,
                             f"{res.verdict_confidence:.4f}"])
    if out:
        _write_rows(out, header, rows)
    click.echo(f"{'band':<22} {'baseline':<22} {'acc':>7} {'viol':>7}  {'region':<12} verdict")
    for r in rows:
        click.echo(f"{r[0]:<22} {r[1]:<22} {float(r[2]):7.4f} {float(r[3]):7.4f}  {r[4]:<12} {r[9]} ({r[10]})")
    if rows:
        regions = [r[4] for r in rows]
        summary = ", ".join(f"{reg.value}: {regions.count(reg.value) / len(regions):.3f}" for reg in Region)
        click.echo(f"proportions over {len(rows)} audited points: {summary}")


@cli.command()
@click.option("--data", "data_path", type=click.Path(dir_okay=False), required=True,
              help="Calibration CSV; empty sensitive cells mark unlabeled rows.")
@click.option("--surrogate", "surrogate_path", type=click.Path(dir_okay=False), required=True,
              help="CSV with an a_hat column, one row per data row.")
@click.option("--predictions", "pred_path", type=click.Path(dir_okay=False), default=None,
              help="CSV with a prediction column, one row per data row.")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--lam", type=float, default=None, help="Lambda at which to evaluate a YOTO --model.")
@click.option("--metric", type=METRICS, default=None)
@click.option("--method", type=METHODS, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--n-boot", type=int, default=1000)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="JSON report.")
@click.pass_context
def scarce(ctx, data_path, surrogate_path, pred_path, model_path, lam, metric, method, alpha, n_boot, seed, out):
    """Corrected and naive fairness intervals with scarce sensitive attributes."""
    if (pred_path is None) == (model_path is None):
        raise click.UsageError("give exactly one of --predictions or --model")
    cfg = _effective(ctx, metric=metric, ci__method=method, ci__alpha=alpha, seed=seed)
    with _exit_codes():
        if model_path:
            model, doc = load_model(model_path)
            data = _load_for_model(cfg, data_path, doc)
            if doc["kind"] == "yoto" and lam is None:
                raise click.UsageError("--lam is required with a YOTO model")
            pred = _predictions(model, doc, [lam if lam is not None else 1.0], data.X)[:, 0]
        else:
            data = load_csv(data_path, _schema(cfg, data_path))
            pred = _read_columns(pred_path, ["prediction"])["prediction"]
        a_hat = _read_columns(surrogate_path, ["a_hat"])["a_hat"]
        if len(a_hat) != len(data) or len(pred) != len(data):
            raise DataError("surrogate and prediction files must have one row per data row")
        part = ScarcePartition.from_dataset(data, a_hat)
        if part.n_labeled == 0 or part.n_unlabeled == 0:
            raise DataError("need both labeled and unlabeled rows")
        known = data.a != MISSING
        ci = cfg["ci"]
        m = CiMethod(ci["method"], bound=ci["bound"], variance=ci["variance"],
                     n_resamples=int(ci["n_resamples"]), seed=int(cfg["seed"]))
        rep = scarce_report(part, pred[known], pred[~known], cfg["metric"], m, float(ci["alpha"]), n_boot,
                            int(cfg["seed"]), "union")
    doc = {"metric": cfg["metric"], "alpha": float(cfg["ci"]["alpha"]), "n_labeled": part.n_labeled,
           "n_unlabeled": part.n_unlabeled, "n_boot": n_boot, **rep.to_dict(), "config": cfg}
    if out:
        Path(out).write_text(json.dumps(doc, indent=1) + "\n")
    c, nv = rep.corrected, rep.naive
    click.echo(f"corrected: [{c.lo:.4f}, {c.hi:.4f}] level {c.level:.2f}")
    click.echo(f"naive (imputed, may be miscalibrated): [{nv.lo:.4f}, {nv.hi:.4f}] level {nv.level:.2f}")


@cli.command("delta-trend")
@click.option("--sizes", default="500,2000,8000", help="Comma-separated training sizes.")
@click.option("--seeds", type=int, default=5, help="Seeds per size.")
@click.option("--metric", type=METRICS, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def delta_trend_cmd(ctx, sizes, seeds, metric, out):
    """Worst-case relative gap of YOTO to the synthetic ground truth versus training size."""
    cfg = _effective(ctx, metric=metric)
    try:
        sizes = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise click.UsageError("--sizes must be comma-separated integers") from None
    if not sizes or min(sizes) <= 0 or seeds <= 0:
        raise click.UsageError("sizes and seeds must be positive")
    with _exit_codes():
        t = cfg["train"]
        tc = TrainConfig(lambda_low=t["lambda_low"], lambda_high=t["lambda_high"],
                         learning_rate=t["learning_rate"], max_epochs=t["max_epochs"],
                         batch_size=t["batch_size"], patience=t["patience"], optimizer=t["optimizer"],
                         surrogate=cfg["surrogate"])
        trend = delta_trend(sizes, range(seeds), DeltaTrendConfig(
            metric=FairnessMetric(cfg["metric"]), synthetic=_synthetic_config(cfg, 0), train=tc))
    if out:
        _write_rows(out, ["size", "median_relative_gap"], [[s, repr(v)] for s, v in trend])
    for s, v in trend:
        click.echo(f"size={s:>6} median worst-case relative gap={v:.5f}")


def main():
    cli(prog_name="fairband")


if __name__ == "__main__":
    main()
