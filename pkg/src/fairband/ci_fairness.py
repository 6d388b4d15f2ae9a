"""Confidence intervals on a classifier's fairness violation.

Each stratum's signed gap (see :mod:`fairband.metrics`) is bounded on its own,
mapped through the absolute value, and the per-stratum intervals are added.
Strata share the error budget equally (union bound), so EO spends alpha/2
per stratum. Within a stratum the signed gap is bounded either

* ``union``: one interval per conditional mean at level 1 - alpha/m, summed; or
* ``subsample``: pair the first ``l = min group size`` rows of each group after
  a seeded shuffle, giving i.i.d. increments phi_i whose mean is the gap.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .ci_mean import CiMethod, Interval, Side, mean_bounds
from .metrics import decompose, stratum_masks

CONSTRUCTIONS = ("union", "subsample")


@dataclass(frozen=True)
class SignedInterval:
    lo: float
    hi: float
    level: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")


def abs_interval(s: SignedInterval) -> Interval:
    """Image of ``s`` under |x|."""
    lo, hi = _abs_bounds(np.array([s.lo]), np.array([s.hi]))
    return Interval(float(lo[0]), float(hi[0]), s.level)


def _abs_bounds(lo, hi):
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    a_lo = np.where(lo > 0, lo, np.where(hi < 0, -hi, 0.0))
    a_hi = np.maximum(np.abs(lo), np.abs(hi))
    return a_lo, a_hi


def _derived_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, np.uint64)[0] >> 1)


def _as_matrix(predictions):
    P = np.asarray(predictions, dtype=float)
    return (P[:, None], True) if P.ndim == 1 else (P, False)


def signed_stratum_bounds(metric, predictions, a, y, method: CiMethod, alpha: float,
                          construction: str = "union", seed: int = 0):
    """Two-sided bounds on each stratum's weighted signed gap.

    Returns ``(lo, hi)`` of shape (n_strata, k) for (n, k) predictions. Jointly
    over strata the coverage is at least 1 - alpha for finite-sample methods.
    """
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"construction must be one of {CONSTRUCTIONS}")
    P, _ = _as_matrix(predictions)
    a = np.asarray(a)
    y = np.asarray(y)
    if not (len(a) == len(y) == P.shape[0]):
        raise ValueError("length mismatch between predictions, a and y")
    masks = stratum_masks(metric, a, y)
    dec = decompose(metric)
    S = len(masks)
    alpha_s = alpha / S
    los, his = [], []
    for s, (m1, m0) in enumerate(masks):
        t1, t0 = dec.stratum_terms(s)
        w = t1.coef
        if construction == "union":
            lo = np.zeros(P.shape[1])
            hi = np.zeros(P.shape[1])
            for j, (t, mask) in enumerate(((t1, m1), (t0, m0))):
                m = method.with_seed(_derived_seed(method.seed, s, j))
                l_, h_ = mean_bounds(P[mask], m, alpha_s / 2.0, Side.TWO_SIDED, (0.0, 1.0))
                if t.coef >= 0:
                    lo += t.coef * l_
                    hi += t.coef * h_
                else:
                    lo += t.coef * h_
                    hi += t.coef * l_
        else:
            rng = np.random.default_rng(_derived_seed(seed, s))
            i1 = np.flatnonzero(m1)
            i0 = np.flatnonzero(m0)
            l = min(len(i1), len(i0))
            if l < 0.25 * max(len(i1), len(i0)):
                warnings.warn(
                    f"subsampling keeps only {l} of {max(len(i1), len(i0))} rows of the larger group",
                    stacklevel=2,
                )
            r1 = rng.permutation(i1)[:l]
            r0 = rng.permutation(i0)[:l]
            phi = t1.coef * P[r1] + t0.coef * P[r0]
            m = method.with_seed(_derived_seed(method.seed, s))
            lo, hi = mean_bounds(phi, m, alpha_s, Side.TWO_SIDED, (-abs(w), abs(w)))
        los.append(lo)
        his.append(hi)
    return np.array(los), np.array(his)


def fairness_bounds(metric, predictions, a, y, method: CiMethod, alpha: float,
                    construction: str = "union", seed: int = 0):
    """Column-wise (lo, hi) bounds on the violation, each of shape (k,)."""
    lo_s, hi_s = signed_stratum_bounds(metric, predictions, a, y, method, alpha, construction, seed)
    a_lo, a_hi = _abs_bounds(lo_s, hi_s)
    return np.clip(a_lo.sum(axis=0), 0.0, 1.0), np.clip(a_hi.sum(axis=0), 0.0, 1.0)


def fairness_ci_union(metric, predictions, a, y, method: CiMethod, alpha: float) -> Interval:
    lo, hi = fairness_bounds(metric, np.ravel(predictions), a, y, method, alpha, "union")
    return Interval(float(lo[0]), float(hi[0]), 1.0 - alpha)


def fairness_ci_subsample(metric, predictions, a, y, method: CiMethod, alpha: float,
                          seed: int = 0) -> Interval:
    lo, hi = fairness_bounds(metric, np.ravel(predictions), a, y, method, alpha, "subsample", seed)
    return Interval(float(lo[0]), float(hi[0]), 1.0 - alpha)


def fairness_ci(metric, predictions, a, y, method: CiMethod, alpha: float,
                construction: str = "union", seed: int = 0) -> Interval:
    if construction == "union":
        return fairness_ci_union(metric, predictions, a, y, method, alpha)
    return fairness_ci_subsample(metric, predictions, a, y, method, alpha, seed)


def subsample_increments(metric, predictions, a, y, seed: int = 0) -> list[np.ndarray]:
    """The paired increments phi_i of each stratum (exposed for inspection/tests)."""
    P = np.asarray(predictions, dtype=float)
    dec = decompose(metric)
    out = []
    for s, (m1, m0) in enumerate(stratum_masks(metric, a, y)):
        t1, t0 = dec.stratum_terms(s)
        rng = np.random.default_rng(_derived_seed(seed, s))
        i1, i0 = np.flatnonzero(m1), np.flatnonzero(m0)
        l = min(len(i1), len(i0))
        out.append(t1.coef * P[rng.permutation(i1)[:l]] + t0.coef * P[rng.permutation(i0)[:l]])
    return out


__all__ = [
    "CONSTRUCTIONS", "SignedInterval", "abs_interval", "fairness_bounds", "fairness_ci",
    "fairness_ci_union", "fairness_ci_subsample", "signed_stratum_bounds",
    "subsample_increments",
]
