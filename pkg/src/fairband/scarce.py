"""Fairness intervals when the sensitive attribute is known for only a few rows.

A surrogate ``a_hat`` (predicted attribute) is available everywhere. The true
violation splits as Phi = (Phi - Phi_tilde) + Phi_tilde, where Phi_tilde uses
``a_hat``. The error term is bootstrapped on the small labeled subset, the
surrogate term gets an ordinary fairness interval on the large unlabeled
subset, and the two intervals are added.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .ci_fairness import SignedInterval, fairness_ci
from .ci_mean import CiMethod, Interval
from .data import MISSING, DataError, Dataset
from .metrics import FairnessMetric, UndefinedStratumError, _STRATA, stratum_masks

MAX_REDRAWS = 100


class ImputationWarning(UserWarning):
    """Interval computed from imputed attributes; coverage is not guaranteed."""


@dataclass
class ScarcePartition:
    labeled: Dataset
    unlabeled: Dataset
    predicted_labeled: np.ndarray
    predicted_unlabeled: np.ndarray

    @classmethod
    def from_dataset(cls, data: Dataset, predicted_a) -> "ScarcePartition":
        """Split on attribute presence; ``predicted_a`` has one entry per row of ``data``."""
        predicted_a = np.asarray(predicted_a).astype(np.int64)
        if len(predicted_a) != len(data):
            raise DataError("predicted attribute must cover every row")
        if not np.isin(predicted_a, (0, 1)).all():
            raise DataError("predicted attribute must be binary")
        known = data.a != MISSING
        return cls(data.subset(np.flatnonzero(known)), data.subset(np.flatnonzero(~known)),
                   predicted_a[known], predicted_a[~known])

    @property
    def n_labeled(self) -> int:
        return len(self.labeled)

    @property
    def n_unlabeled(self) -> int:
        return len(self.unlabeled)


def _resampled_violations(counts, h, a, y, metric):
    """Violation of ``h`` on each resample given as a row of multiplicities.

    Returns (values, ok) where ``ok`` flags resamples with every cell present.
    """
    values = np.zeros(counts.shape[0])
    ok = np.ones(counts.shape[0], dtype=bool)
    for label, weight in _STRATA[FairnessMetric(metric)]:
        base = np.ones(len(a), dtype=bool) if label is None else (y == label)
        rates = []
        for g in (1, 0):
            cell = (base & (a == g)).astype(float)
            denom = counts @ cell
            ok &= denom > 0
            rates.append((counts @ (cell * h)) / np.where(denom > 0, denom, 1.0))
        values += weight * np.abs(rates[0] - rates[1])
    return values, ok


def epsilon_ci_bootstrap(a, a_hat, y, predictions, metric, n_boot: int = 1000,
                         alpha: float = 0.05, seed: int = 0) -> SignedInterval:
    """Percentile bootstrap interval on Phi(true a) - Phi(a_hat) over the labeled rows.

    Resamples missing a group or stratum (under either attribute) are redrawn,
    at most ``MAX_REDRAWS`` times each.
    """
    if n_boot < 1:
        raise ValueError("n_boot must be positive")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    a, a_hat, y = (np.asarray(v).astype(np.int64) for v in (a, a_hat, y))
    h = np.asarray(predictions, dtype=float)
    n = len(h)
    if not len(a) == len(a_hat) == len(y) == n:
        raise ValueError("length mismatch")
    stratum_masks(metric, a, y)
    stratum_masks(metric, a_hat, y)
    if n_boot == 1:
        warnings.warn("a single bootstrap resample gives a degenerate interval", stacklevel=2)

    rng = np.random.default_rng(seed)

    def draw(k):
        flat = rng.integers(0, n, size=(k, n)) + n * np.arange(k)[:, None]
        return np.bincount(flat.ravel(), minlength=k * n).reshape(k, n).astype(float)

    counts = draw(n_boot)
    for _ in range(MAX_REDRAWS + 1):
        v_true, ok_true = _resampled_violations(counts, h, a, y, metric)
        v_sur, ok_sur = _resampled_violations(counts, h, a_hat, y, metric)
        bad = ~(ok_true & ok_sur)
        if not bad.any():
            break
        counts[bad] = draw(int(bad.sum()))
    else:
        raise UndefinedStratumError(
            f"bootstrap resamples kept missing a stratum after {MAX_REDRAWS} redraws; "
            "the labeled set is too small"
        )
    eps = v_true - v_sur
    lo, hi = np.quantile(eps, [alpha / 2.0, 1.0 - alpha / 2.0])
    return SignedInterval(float(lo), float(hi), 1.0 - alpha)


def tilde_fairness_ci(a_hat, y, predictions, metric, method: CiMethod, alpha: float,
                      construction: str = "union", seed: int = 0) -> Interval:
    """Fairness interval with the predicted attribute standing in for the true one."""
    return fairness_ci(metric, predictions, np.asarray(a_hat), y, method, alpha, construction, seed)


def combined_ci(eps: SignedInterval, tilde: Interval) -> Interval:
    """Minkowski sum of the two intervals, clamped to [0, 1], at level 1 - 2*alpha."""
    if not np.isclose(eps.level, tilde.level):
        raise ValueError(f"level mismatch: {eps.level} vs {tilde.level}")
    alpha = 1.0 - tilde.level
    lo = min(max(eps.lo + tilde.lo, 0.0), 1.0)
    hi = min(max(eps.hi + tilde.hi, 0.0), 1.0)
    return Interval(lo, hi, max(0.0, 1.0 - 2.0 * alpha))


def naive_imputed_ci(a, a_hat, y, predictions, metric, method: CiMethod, alpha: float,
                     construction: str = "union", seed: int = 0) -> Interval:
    """Fill missing attributes with the prediction and bound as if they were true.

    Known attributes are kept. The result is biased whenever the predictor
    errs, so an :class:`ImputationWarning` is always emitted.
    """
    a = np.asarray(a).astype(np.int64)
    filled = np.where(a == MISSING, np.asarray(a_hat).astype(np.int64), a)
    warnings.warn("naive imputation: interval ignores attribute prediction error and may be miscalibrated",
                  ImputationWarning, stacklevel=2)
    return fairness_ci(metric, predictions, filled, y, method, alpha, construction, seed)


@dataclass(frozen=True)
class ScarceReport:
    epsilon: SignedInterval
    tilde: Interval
    corrected: Interval
    naive: Interval

    def to_dict(self) -> dict:
        return {
            "epsilon": {"lo": self.epsilon.lo, "hi": self.epsilon.hi, "level": self.epsilon.level},
            "tilde": self.tilde.to_dict(),
            "corrected": self.corrected.to_dict(),
            "naive": self.naive.to_dict(),
        }


def scarce_report(part: ScarcePartition, pred_labeled, pred_unlabeled, metric, method: CiMethod,
                  alpha: float = 0.05, n_boot: int = 1000, seed: int = 0,
                  construction: str = "union") -> ScarceReport:
    """Corrected and naive intervals for one classifier's predictions on both subsets."""
    eps = epsilon_ci_bootstrap(part.labeled.a, part.predicted_labeled, part.labeled.y, pred_labeled,
                               metric, n_boot, alpha, seed)
    tilde = tilde_fairness_ci(part.predicted_unlabeled, part.unlabeled.y, pred_unlabeled, metric,
                              method, alpha, construction, seed)
    a_all = np.concatenate([part.labeled.a, np.full(part.n_unlabeled, MISSING)])
    a_hat_all = np.concatenate([part.predicted_labeled, part.predicted_unlabeled])
    y_all = np.concatenate([part.labeled.y, part.unlabeled.y])
    p_all = np.concatenate([np.asarray(pred_labeled), np.asarray(pred_unlabeled)])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ImputationWarning)
        naive = naive_imputed_ci(a_all, a_hat_all, y_all, p_all, metric, method, alpha, construction, seed)
    return ScarceReport(eps, tilde, combined_ci(eps, tilde), naive)
