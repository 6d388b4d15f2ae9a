"""Confidence bands on the optimal accuracy-fairness trade-off and audits against them.

Upper band: every classifier h with accuracy >= L_acc(h) (w.h.p.) certifies
tau*(L_acc(h)) <= Phi(h) <= U_fair(h). Lower band: if h is at most ``delta``
worse than optimal, tau*(U_acc(h)) >= L_fair(h) - delta. Each pair spends
alpha/2 per one-sided interval. The per-lambda pairs are then combined into
monotone step envelopes over an accuracy grid.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .ci_fairness import CONSTRUCTIONS, _derived_seed, fairness_bounds
from .ci_mean import CiMethod, Side, mean_bounds
from .data import Dataset, SyntheticConfig, generate_synthetic
from .metrics import FairnessMetric, violation
from .model import TradeoffPoint, TrainConfig, predictions_grid, train_yoto
from .oracle import ground_truth_curve, threshold_of, true_gap


class Region(str, Enum):
    UNLIKELY = "Unlikely"
    PERMISSIBLE = "Permissible"
    SUBOPTIMAL = "Suboptimal"


class Verdict(str, Enum):
    CONFIDENTLY_SUBOPTIMAL = "ConfidentlySuboptimal"
    CONFIDENTLY_BEATS_YOTO = "ConfidentlyBeatsYoto"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BandOptions:
    """CI settings shared by both bands: mean-CI method, fairness construction, seed."""

    method: CiMethod = field(default_factory=CiMethod)
    construction: str = "subsample"
    seed: int = 0

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"construction must be one of {CONSTRUCTIONS}")

    def to_dict(self) -> dict:
        m = self.method
        return {"method": m.kind.value, "bound": m.bound, "variance": m.variance, "sigma2": m.sigma2,
                "n_resamples": m.n_resamples, "bootstrap_seed": m.seed,
                "construction": self.construction, "seed": self.seed}


@dataclass
class BandPairs:
    """One (accuracy endpoint, fairness endpoint) pair per lambda."""

    accuracy: np.ndarray
    fairness: np.ndarray
    lambdas: np.ndarray

    def __post_init__(self):
        self.accuracy = np.atleast_1d(np.asarray(self.accuracy, dtype=float))
        self.fairness = np.atleast_1d(np.asarray(self.fairness, dtype=float))
        self.lambdas = np.atleast_1d(np.asarray(self.lambdas, dtype=float))
        if not len(self.accuracy) == len(self.fairness) == len(self.lambdas):
            raise ValueError("pair arrays must have equal length")

    def __len__(self):
        return len(self.accuracy)

    def __iter__(self):
        return iter(zip(self.accuracy.tolist(), self.fairness.tolist(), self.lambdas.tolist()))


def _accuracy_bound(P, y, side, alpha, opts: BandOptions):
    agree = (P == np.asarray(y)[:, None]).astype(float)
    method = opts.method.with_seed(_derived_seed(opts.method.seed, 1))
    lo, hi = mean_bounds(agree, method, alpha, side, (0.0, 1.0))
    return lo if side is Side.LOWER else hi


def _fairness_bounds(P, a, y, metric, alpha, opts: BandOptions):
    # the upper and lower bands each take one end of a two-sided interval at alpha
    # (alpha/2 per tail); for bounded methods this is exactly a one-sided bound at alpha/2
    method = opts.method.with_seed(_derived_seed(opts.method.seed, 2))
    return fairness_bounds(metric, P, a, y, method, alpha, opts.construction, opts.seed)


def pairs_from_predictions(P, a, y, metric, alpha, lambdas, opts: BandOptions = BandOptions(),
                           delta: float = 0.0) -> tuple[BandPairs, BandPairs]:
    """(upper pairs, lower pairs) for the columns of a prediction matrix.

    Upper pairs are (L_acc, U_fair), lower pairs (U_acc, max(0, L_fair - delta)),
    every one-sided interval at level 1 - alpha/2.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    P = np.asarray(P)
    if P.ndim == 1:
        P = P[:, None]
    half = alpha / 2.0
    l_acc = _accuracy_bound(P, y, Side.LOWER, half, opts)
    u_acc = _accuracy_bound(P, y, Side.UPPER, half, opts)
    l_fair, u_fair = _fairness_bounds(P, a, y, metric, alpha, opts)
    return (BandPairs(l_acc, u_fair, lambdas),
            BandPairs(u_acc, np.maximum(l_fair - delta, 0.0), lambdas))


def _grid_predictions(model, lambda_grid, cal: Dataset):
    cal.require_attribute("band construction")
    grid = np.atleast_1d(np.asarray(lambda_grid, dtype=float))
    if grid.size == 0:
        raise ValueError("lambda grid must be nonempty")
    return predictions_grid(model, grid, cal.X), grid


def upper_band(model, lambda_grid, cal: Dataset, metric, alpha, opts: BandOptions = BandOptions()) -> BandPairs:
    """Per-lambda (L_acc, U_fair) pairs on the calibration data."""
    P, grid = _grid_predictions(model, lambda_grid, cal)
    return pairs_from_predictions(P, cal.a, cal.y, metric, alpha, grid, opts)[0]


def lower_band(model, lambda_grid, cal: Dataset, metric, alpha, delta: float = 0.0,
               opts: BandOptions = BandOptions()) -> BandPairs:
    """Per-lambda (U_acc, max(0, L_fair - delta)) pairs on the calibration data."""
    P, grid = _grid_predictions(model, lambda_grid, cal)
    return pairs_from_predictions(P, cal.a, cal.y, metric, alpha, grid, opts, delta)[1]


# -- envelopes


def _upper_envelope(pairs: BandPairs, psi):
    """min fairness over pairs with accuracy >= psi (1 when none), and the source lambda."""
    psi = np.atleast_1d(np.asarray(psi, dtype=float))
    ok = pairs.accuracy[None, :] >= psi[:, None]
    vals = np.where(ok, pairs.fairness[None, :], np.inf)
    idx = vals.argmin(axis=1)
    has = ok.any(axis=1)
    return (np.where(has, vals[np.arange(len(psi)), idx], 1.0),
            np.where(has, pairs.lambdas[idx], np.nan))


def _lower_envelope(pairs: BandPairs, psi):
    """max fairness over pairs with accuracy <= psi (0 when none), and the source lambda."""
    psi = np.atleast_1d(np.asarray(psi, dtype=float))
    ok = pairs.accuracy[None, :] <= psi[:, None]
    vals = np.where(ok, pairs.fairness[None, :], -np.inf)
    idx = vals.argmax(axis=1)
    has = ok.any(axis=1)
    return (np.where(has, np.maximum(vals[np.arange(len(psi)), idx], 0.0), 0.0),
            np.where(has, pairs.lambdas[idx], np.nan))


@dataclass
class TradeoffBand:
    """Monotone step band [lower(psi), upper(psi)] on the optimal trade-off.

    ``upper_at``/``lower_at`` evaluate the envelopes exactly from the pairs;
    on the stored grid they agree with ``upper``/``lower``. Where the lower
    envelope would exceed the upper one it is cut down to the upper value.
    """

    psi: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    lambda_lower_src: np.ndarray
    lambda_upper_src: np.ndarray
    alpha: float
    delta_used: float
    upper_pairs: BandPairs
    lower_pairs: BandPairs
    yoto_curve: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def points(self):
        return list(zip(self.psi.tolist(), self.upper.tolist(), self.lower.tolist(),
                        self.lambda_upper_src.tolist(), self.lambda_lower_src.tolist()))

    def upper_at(self, psi):
        out = _upper_envelope(self.upper_pairs, psi)[0]
        return float(out[0]) if np.ndim(psi) == 0 else out

    def lower_at(self, psi):
        low = _lower_envelope(self.lower_pairs, psi)[0]
        out = np.minimum(low, _upper_envelope(self.upper_pairs, psi)[0])
        return float(out[0]) if np.ndim(psi) == 0 else out

    def contains(self, psi, value, tol: float = 0.0) -> np.ndarray:
        """Elementwise lower(psi) - tol <= value <= upper(psi) + tol."""
        value = np.asarray(value, dtype=float)
        return (self.lower_at(psi) - tol <= value) & (value <= self.upper_at(psi) + tol)

    def sidecar(self) -> dict:
        doc = {"alpha": self.alpha, "level": 1.0 - self.alpha, "delta_used": self.delta_used,
               "grid_size": int(len(self.psi))}
        doc.update(self.meta)
        return doc

    def to_csv(self, path, sidecar: bool = True):
        """Write the band CSV and, next to it, the JSON sidecar (``<stem>.json``)."""
        path = Path(path)

        def fmt(v):
            return "" if math.isnan(v) else repr(float(v))

        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["psi", "lower", "upper", "lambda_lower_src", "lambda_upper_src"])
            for row in zip(self.psi, self.lower, self.upper, self.lambda_lower_src, self.lambda_upper_src):
                w.writerow([fmt(v) for v in row])
        if sidecar:
            path.with_suffix(".json").write_text(json.dumps(self.sidecar(), indent=1, sort_keys=True) + "\n")

    @classmethod
    def from_csv(cls, path) -> "TradeoffBand":
        """Reload a band written by :meth:`to_csv` (sidecar read when present).

        The grid holds every pair endpoint, so the step envelopes rebuilt from
        the grid values match the original band at every grid point.
        """
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            need = {"psi", "lower", "upper", "lambda_lower_src", "lambda_upper_src"}
            if reader.fieldnames is None or not need <= set(reader.fieldnames):
                raise ValueError(f"{path}: not a band file (expected columns {sorted(need)})")
            rows = list(reader)
        if not rows:
            raise ValueError(f"{path}: empty band")

        def col(name):
            return np.array([float(r[name]) if r[name] != "" else np.nan for r in rows])

        psi, lower, upper = col("psi"), col("lower"), col("upper")
        side = path.with_suffix(".json")
        meta = json.loads(side.read_text()) if side.exists() else {}
        alpha = float(meta.pop("alpha", 0.05))
        delta = float(meta.pop("delta_used", 0.0))
        meta.pop("level", None)
        meta.pop("grid_size", None)
        return cls(psi, lower, upper, col("lambda_lower_src"), col("lambda_upper_src"), alpha, delta,
                   BandPairs(psi, upper, col("lambda_upper_src")),
                   BandPairs(psi, lower, col("lambda_lower_src")), [], meta)


def band_grid(upper_pairs: BandPairs, lower_pairs: BandPairs, n_fill: int = 100) -> np.ndarray:
    """Sorted union of all accuracy endpoints and ``n_fill`` uniform points on [0, 1]."""
    return np.unique(np.concatenate([upper_pairs.accuracy, lower_pairs.accuracy, np.linspace(0.0, 1.0, n_fill)]))


def monotonize(upper_pairs: BandPairs, lower_pairs: BandPairs, alpha: float, delta_used: float = 0.0,
               yoto_curve=(), n_fill: int = 100, meta: dict | None = None) -> TradeoffBand:
    if len(upper_pairs) == 0 or len(lower_pairs) == 0:
        raise ValueError("need at least one pair per side")
    psi = band_grid(upper_pairs, lower_pairs, n_fill)
    upper, lam_up = _upper_envelope(upper_pairs, psi)
    lower, lam_lo = _lower_envelope(lower_pairs, psi)
    lower = np.minimum(lower, upper)
    return TradeoffBand(psi, lower, upper, lam_lo, lam_up, alpha, delta_used, upper_pairs, lower_pairs,
                        list(yoto_curve), dict(meta or {}))


def build_band(model, lambda_grid, cal: Dataset, metric, alpha: float, delta: float = 0.0,
               opts: BandOptions = BandOptions(), n_fill: int = 100, meta: dict | None = None) -> TradeoffBand:
    """Both bands for a YOTO model in one pass over the calibration data."""
    P, grid = _grid_predictions(model, lambda_grid, cal)
    up, lo = pairs_from_predictions(P, cal.a, cal.y, metric, alpha, grid, opts, delta)
    accs = (P == cal.y[:, None]).mean(axis=0)
    viols = np.atleast_1d(violation(metric, P, cal.a, cal.y))
    curve = [TradeoffPoint(float(ac), float(v), float(l)) for ac, v, l in zip(accs, viols, grid)]
    info = {"metric": FairnessMetric(metric).value, **opts.to_dict(), **(meta or {})}
    return monotonize(up, lo, alpha, delta, curve, n_fill, info)


# -- sensitivity analysis


@dataclass
class SensitivityReport:
    delta_hat: float
    contributing_models: list
    per_lambda_gaps: list


def sensitivity_delta(yoto_sweep, comparison_sweeps) -> SensitivityReport:
    """Largest empirical gap between the YOTO curve and better comparison models.

    For each YOTO point the reference is the least violation among comparison
    points at least as accurate (and the YOTO point itself), so every gap is
    nonnegative. ``comparison_sweeps`` is a list of ``(model_id, points)``.
    """
    yoto_sweep = list(yoto_sweep)
    if not yoto_sweep:
        raise ValueError("empty YOTO sweep")
    comp = [(mid, p) for mid, pts in comparison_sweeps for p in pts]
    contributing = []
    gaps = []
    for p in yoto_sweep:
        best = p.violation
        for mid, q in comp:
            if q.accuracy >= p.accuracy and q.violation < p.violation:
                best = min(best, q.violation)
                if mid not in contributing:
                    contributing.append(mid)
        gaps.append((p.lam, p.violation - best))
    return SensitivityReport(max(g for _, g in gaps), contributing, gaps)


# -- classification and audits


def classify(point, band: TradeoffBand) -> Region:
    """Region of a (accuracy, violation) point; endpoints count as Permissible."""
    acc, viol = float(point.accuracy), float(point.violation)
    if not band.psi[0] <= acc <= band.psi[-1]:
        raise ValueError(f"accuracy {acc} outside the band grid [{band.psi[0]}, {band.psi[-1]}]")
    if viol > band.upper_at(acc):
        return Region.SUBOPTIMAL
    if viol < band.lower_at(acc):
        return Region.UNLIKELY
    return Region.PERMISSIBLE


@dataclass(frozen=True)
class _Point:
    accuracy: float
    violation: float


@dataclass(frozen=True)
class ConfidenceRegion:
    """Box [L_acc, U_acc] x [L_fair, U_fair] with its two extreme corners."""

    best_case: tuple[float, float]
    worst_case: tuple[float, float]
    level: float
    plug_in: tuple[float, float]

    def __post_init__(self):
        if self.worst_case[0] > self.best_case[0] or self.best_case[1] > self.worst_case[1]:
            raise ValueError("inconsistent confidence region")

    def to_dict(self) -> dict:
        return {"best_case": list(self.best_case), "worst_case": list(self.worst_case),
                "level": self.level, "plug_in": list(self.plug_in)}


@dataclass(frozen=True)
class AuditResult:
    region: Region
    confidence_region: ConfidenceRegion
    verdict: Verdict
    verdict_confidence: float


def baseline_region(predictions, a, y, alpha: float, band: TradeoffBand, metric,
                    opts: BandOptions = BandOptions()) -> tuple[ConfidenceRegion, Verdict]:
    """Confidence region of a baseline and the verdict against ``band``.

    Verdicts hold at confidence 1 - 2*alpha (region and band each at 1 - alpha).
    """
    result = audit_baseline(predictions, a, y, alpha, band, metric, opts)
    return result.confidence_region, result.verdict


def audit_baseline(predictions, a, y, alpha: float, band: TradeoffBand, metric,
                   opts: BandOptions = BandOptions()) -> AuditResult:
    P = np.asarray(predictions).reshape(-1, 1)
    up, lo = pairs_from_predictions(P, a, y, metric, alpha, [np.nan], opts)
    l_acc, u_fair = float(up.accuracy[0]), float(up.fairness[0])
    u_acc, l_fair = float(lo.accuracy[0]), float(lo.fairness[0])
    plug = (float(np.mean(P[:, 0] == np.asarray(y))), float(violation(metric, P[:, 0], a, y)))
    region = ConfidenceRegion((u_acc, l_fair), (l_acc, u_fair), 1.0 - alpha, plug)
    if classify(_Point(*region.best_case), band) is Region.SUBOPTIMAL:
        verdict = Verdict.CONFIDENTLY_SUBOPTIMAL
    elif classify(_Point(*region.worst_case), band) is Region.UNLIKELY:
        verdict = Verdict.CONFIDENTLY_BEATS_YOTO
    else:
        verdict = Verdict.INCONCLUSIVE
    return AuditResult(classify(_Point(*plug), band), region, verdict, max(0.0, 1.0 - 2.0 * alpha))


# -- convergence of the YOTO gap on synthetic data


@dataclass(frozen=True)
class DeltaTrendConfig:
    metric: FairnessMetric = FairnessMetric.DP
    synthetic: SyntheticConfig = field(default_factory=SyntheticConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    lambdas: tuple = tuple(np.logspace(-6, np.log10(5.0), 50).tolist())
    val_fraction: float = 0.25
    tau_floor: float = 0.01


def relative_gap(model, config: DeltaTrendConfig, curve=None) -> float:
    """max over lambda of Delta(h_lambda) / tau*(acc(h_lambda)), from the analytic oracle.

    Lambdas where tau* falls below ``tau_floor`` are skipped (the ratio is
    unstable there); returns 0 if none remain.
    """
    curve = curve or ground_truth_curve(config.metric, config=config.synthetic)
    best = 0.0
    for lam in config.lambdas:
        c, orient = threshold_of(model, lam)
        _, _, gap, tau = true_gap(config.metric, c, orient, curve, config.synthetic)
        if tau >= config.tau_floor:
            best = max(best, gap / tau)
    return best


def delta_trend(sizes, seeds, config: DeltaTrendConfig = DeltaTrendConfig()):
    """[(size, median over seeds of the worst-case relative gap)] for YOTO models."""
    curve = ground_truth_curve(config.metric, config=config.synthetic)
    out = []
    for size in sizes:
        values = []
        for seed in seeds:
            base = _derived_seed(int(seed), int(size))
            n_val = max(100, int(round(config.val_fraction * size)))
            syn = config.synthetic
            train = generate_synthetic(SyntheticConfig(**{**syn.__dict__, "seed": base}), size)
            val = generate_synthetic(SyntheticConfig(**{**syn.__dict__, "seed": base + 1}), n_val)
            tc = TrainConfig(**{**config.train.to_dict(), "metric": config.metric, "seed": int(seed)})
            model = train_yoto(train, val, tc)
            values.append(relative_gap(model, config, curve))
        out.append((size, float(np.median(values))))
    return out
