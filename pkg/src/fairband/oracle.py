"""Ground truth for the synthetic generator and brute-force reference metrics.

Threshold classifiers h_c(x) = 1(x > c) are evaluated in closed form from the
Gaussian CDF (``scipy.special.ndtr``, double precision). The optimal
trade-off tau*(psi) is the lower envelope of the (accuracy, violation) pairs
of this family: the least violation among thresholds with accuracy >= psi.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.special import ndtr

from .data import SyntheticConfig, generate_synthetic
from .metrics import FairnessMetric


def _cell_probs(c, config: SyntheticConfig, orientation: int):
    """Per-group P(h=1), P(h=1, Y=1) and P(Y=1) for thresholds ``c`` (array)."""
    c = np.asarray(c, dtype=float)
    sd, t, keep = config.noise_sd, config.label_threshold, config.label_flip_keep
    out = {}
    for a, mu in enumerate(config.group_means):
        F = lambda v: ndtr((v - mu) / sd)  # noqa: E731
        above_t = 1.0 - F(t)
        p_y1 = keep * above_t + (1 - keep) * (1 - above_t)
        # h = 1(X > c)
        p_h1 = 1.0 - F(c)
        p_h1_y1 = keep * (1.0 - F(np.maximum(c, t))) + (1 - keep) * np.maximum(F(t) - F(c), 0.0)
        if orientation < 0:  # h = 1(X <= c)
            p_h1 = 1.0 - p_h1
            p_h1_y1 = p_y1 - p_h1_y1
        out[a] = (p_h1, p_h1_y1, p_y1)
    return out


def analytic_tradeoff(metric, c, config: SyntheticConfig = SyntheticConfig(), orientation: int = 1):
    """Exact (accuracy, violation) arrays of h_c under the synthetic mechanism.

    ``orientation=-1`` evaluates the reversed classifier 1(x <= c). ``c`` may be
    +/- inf (constant classifiers).
    """
    metric = FairnessMetric(metric)
    cells = _cell_probs(c, config, orientation)
    pi = {1: config.group_prob, 0: 1 - config.group_prob}
    acc = 0.0
    rates = {}
    for a in (0, 1):
        p_h1, p_h1_y1, p_y1 = cells[a]
        p_h1_y0 = p_h1 - p_h1_y1
        p_y0 = 1 - p_y1
        acc = acc + pi[a] * (p_h1_y1 + (p_y0 - p_h1_y0))
        rates[a] = (p_h1, p_h1_y1 / p_y1, p_h1_y0 / p_y0)
    dp = np.abs(rates[1][0] - rates[0][0])
    tpr_gap = np.abs(rates[1][1] - rates[0][1])
    fpr_gap = np.abs(rates[1][2] - rates[0][2])
    viol = {FairnessMetric.DP: dp, FairnessMetric.EOP: tpr_gap,
            FairnessMetric.EO: 0.5 * tpr_gap + 0.5 * fpr_gap}[metric]
    return acc, viol


def analytic_point(metric, c: float, config: SyntheticConfig = SyntheticConfig()):
    """(accuracy, violation) of 1(x > c) in closed form."""
    acc, viol = analytic_tradeoff(metric, np.array([c], dtype=float), config)
    return float(acc[0]), float(viol[0])


def monte_carlo_tradeoff(metric, c, config: SyntheticConfig, n: int, seed: int):
    """Empirical (accuracy, violation) of thresholds ``c`` on one large synthetic draw."""
    metric = FairnessMetric(metric)
    data = generate_synthetic(SyntheticConfig(**{**config.__dict__, "seed": seed}), n)
    x = data.X[:, 0]
    c = np.asarray(c, dtype=float)

    def above(mask):
        xs = np.sort(x[mask])
        return len(xs) - np.searchsorted(xs, c, side="right"), len(xs)

    rate = {}
    correct = 0.0
    for a in (0, 1):
        k1, n1 = above((data.a == a) & (data.y == 1))
        k0, n0 = above((data.a == a) & (data.y == 0))
        rate[a] = ((k1 + k0) / (n1 + n0), k1 / n1, k0 / n0)
        correct = correct + k1 + (n0 - k0)
    acc = correct / n
    dp = np.abs(rate[1][0] - rate[0][0])
    tpr_gap = np.abs(rate[1][1] - rate[0][1])
    fpr_gap = np.abs(rate[1][2] - rate[0][2])
    viol = {FairnessMetric.DP: dp, FairnessMetric.EOP: tpr_gap,
            FairnessMetric.EO: 0.5 * tpr_gap + 0.5 * fpr_gap}[metric]
    return acc, viol


@dataclass
class GroundTruthCurve:
    thresholds: np.ndarray
    accuracy: np.ndarray
    violation: np.ndarray
    metric: FairnessMetric
    source: str

    def __post_init__(self):
        order = np.argsort(-self.accuracy, kind="stable")
        self._acc_desc = self.accuracy[order]
        self._cummin = np.minimum.accumulate(self.violation[order])

    def __len__(self):
        return len(self.thresholds)

    @property
    def max_accuracy(self) -> float:
        return float(self.accuracy.max())

    def tau(self, psi):
        """tau*(psi): least violation among thresholds with accuracy >= psi (nan if none)."""
        psi = np.asarray(psi, dtype=float)
        # number of thresholds with accuracy >= psi
        k = np.searchsorted(-self._acc_desc, -psi, side="right")
        out = np.where(k > 0, self._cummin[np.maximum(k - 1, 0)], np.nan)
        return float(out) if out.ndim == 0 else out

    def to_csv(self, path):
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["c", "accuracy", "violation"])
            for row in zip(self.thresholds, self.accuracy, self.violation):
                w.writerow([repr(float(v)) for v in row])


def default_threshold_grid(n: int = 20001, lo: float = -3.0, hi: float = 3.0) -> np.ndarray:
    """Uniform grid on [lo, hi] plus the two constant classifiers (c = -inf, +inf)."""
    return np.concatenate([[-np.inf], np.linspace(lo, hi, n), [np.inf]])


def ground_truth_curve(metric, grid=None, config: SyntheticConfig = SyntheticConfig(),
                       source="analytic", n: int = 500_000, seed: int = 0) -> GroundTruthCurve:
    """Trade-offs of the threshold family over ``grid`` (default: uniform on [-3, 3] plus constants).

    ``source`` is "analytic" (closed form) or "monte_carlo" (one draw of ``n``
    samples with ``seed``).
    """
    metric = FairnessMetric(metric)
    if grid is None:
        # the Bayes threshold is added so the envelope reaches the maximum accuracy exactly
        grid = np.union1d(default_threshold_grid(), [config.label_threshold])
    grid = np.asarray(grid, dtype=float)
    if source == "analytic":
        acc, viol = analytic_tradeoff(metric, grid, config)
        label = "analytic"
    elif source == "monte_carlo":
        acc, viol = monte_carlo_tradeoff(metric, grid, config, n, seed)
        label = f"monte_carlo(n={n}, seed={seed})"
    else:
        raise ValueError("source must be 'analytic' or 'monte_carlo'")
    return GroundTruthCurve(grid, np.asarray(acc, dtype=float), np.asarray(viol, dtype=float), metric, label)


def threshold_of(model, lam) -> tuple[float, int]:
    """Equivalent threshold and orientation of a one-feature model at ``lam``.

    The classifier 1(logit > 0) equals 1(x > c) for orientation +1 and
    1(x <= c) (up to a null set) for orientation -1.
    """
    if model.feature_dim != 1:
        raise ValueError("threshold form exists only for one-feature models")
    scale, shift = model.modulation(lam)
    slope = float(scale[0] * model.w[0])
    offset = float(scale[0] * model.b + shift[0])
    if slope == 0.0:
        return (-np.inf, 1) if offset > 0 else (np.inf, 1)
    return -offset / slope, (1 if slope > 0 else -1)


def true_gap(metric, c: float, orientation: int, curve: GroundTruthCurve,
             config: SyntheticConfig = SyntheticConfig()):
    """(accuracy, violation, Delta, tau*) of a threshold classifier.

    Delta = violation - tau*(accuracy); the classifier itself is a member of
    the family, so tau* never exceeds its own violation.
    """
    acc, viol = analytic_tradeoff(metric, np.array([c]), config, orientation)
    acc, viol = float(acc[0]), float(viol[0])
    tau = curve.tau(acc)
    tau = viol if np.isnan(tau) else min(tau, viol)
    return acc, viol, viol - tau, tau


def brute_force_violation(metric, a, y, predictions) -> float:
    """Violation by direct counting with exact rational arithmetic.

    Deliberately independent of :mod:`fairband.metrics`. Raises ValueError when
    a conditioning cell is empty.
    """
    metric = FairnessMetric(metric)
    rows = list(zip((int(v) for v in a), (int(v) for v in y), (int(v) for v in predictions)))

    def rate(group, label=None):
        hits = total = 0
        for ai, yi, pi in rows:
            if ai == group and (label is None or yi == label):
                total += 1
                hits += pi
        if total == 0:
            raise ValueError(f"no rows with a={group}" + ("" if label is None else f", y={label}"))
        return Fraction(hits, total)

    if metric is FairnessMetric.DP:
        v = abs(rate(1) - rate(0))
    elif metric is FairnessMetric.EOP:
        v = abs(rate(1, 1) - rate(0, 1))
    else:
        v = Fraction(1, 2) * abs(rate(1, 1) - rate(0, 1)) + Fraction(1, 2) * abs(rate(1, 0) - rate(0, 0))
    return float(v)
