"""Confidence intervals on the mean of bounded i.i.d. samples.

Four methods: Hoeffding, Bernstein (plug-in or known variance), normal
approximation (CLT) and percentile bootstrap. One-sided intervals spend the
whole ``alpha`` on one tail; two-sided intervals spend ``alpha/2`` per tail.

The private ``mean_bounds`` kernel works column-wise on an (n, k) matrix so a
whole grid of classifiers can be bounded in one call; the bootstrap then
shares a single resample-count matrix across columns.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.stats import norm


class Side(str, Enum):
    LOWER = "lower"
    UPPER = "upper"
    TWO_SIDED = "two_sided"


class Method(str, Enum):
    HOEFFDING = "hoeffding"
    BERNSTEIN = "bernstein"
    CLT = "clt"
    BOOTSTRAP = "bootstrap"


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    level: float
    side: Side = Side.TWO_SIDED

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        object.__setattr__(self, "side", Side(self.side))

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "level": self.level, "side": self.side.value}


@dataclass(frozen=True)
class CiMethod:
    """How to bound a mean.

    ``bound`` is Bernstein's per-summand range B on data rescaled to [0, 1];
    ``variance`` is "plugin" (sample variance) or "known" (use ``sigma2``, in
    the units of the original data). ``n_resamples``/``seed`` drive the bootstrap.
    """

    kind: Method = Method.HOEFFDING
    bound: float = 1.0
    variance: str = "plugin"
    sigma2: float | None = None
    n_resamples: int = 1000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Method(self.kind))
        if not self.bound > 0:
            raise ValueError("bound must be positive")
        if self.variance not in ("plugin", "known"):
            raise ValueError("variance must be 'plugin' or 'known'")
        if self.variance == "known" and (self.sigma2 is None or self.sigma2 < 0):
            raise ValueError("known-variance Bernstein needs sigma2 >= 0")
        if self.kind is Method.BOOTSTRAP and self.n_resamples < 100:
            raise ValueError("bootstrap needs at least 100 resamples")

    @property
    def finite_sample(self) -> bool:
        return self.kind in (Method.HOEFFDING, Method.BERNSTEIN)

    def with_seed(self, seed: int) -> "CiMethod":
        return replace(self, seed=seed)


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def hoeffding_halfwidth(n, alpha, side=Side.TWO_SIDED) -> float:
    """Half-width for [0, 1] data: sqrt(log(c/alpha) / (2n)), c=2 two-sided, 1 one-sided."""
    _check_alpha(alpha)
    c = 2.0 if Side(side) is Side.TWO_SIDED else 1.0
    return math.sqrt(math.log(c / alpha) / (2.0 * n))


def bernstein_halfwidth(n, sigma2, B, alpha):
    """One-sided Bernstein half-width on the mean scale.

    Solves exp(-t^2 / (2 n sigma2 + (2/3) t B)) = alpha for the sum-scale
    deviation t and returns t / n. ``sigma2`` is the per-summand variance.
    Vectorizes over ``sigma2``.
    """
    _check_alpha(alpha)
    if B <= 0:
        raise ValueError("B must be positive")
    sigma2 = np.asarray(sigma2, dtype=float)
    if np.any(sigma2 < 0):
        raise ValueError("sigma2 must be nonnegative")
    L = math.log(1.0 / alpha)
    p = (2.0 * B / 3.0) * L
    t = 0.5 * (p + np.sqrt(p * p + 8.0 * n * sigma2 * L))
    out = t / n
    return float(out) if out.ndim == 0 else out


def _bootstrap_counts(n: int, n_resamples: int, seed: int) -> np.ndarray:
    """(n_resamples, n) multiplicities of each row in each resample."""
    rng = np.random.default_rng(seed)
    counts = np.empty((n_resamples, n), dtype=np.float64)
    chunk = max(1, 4_000_000 // max(n, 1))
    for start in range(0, n_resamples, chunk):
        stop = min(n_resamples, start + chunk)
        rows = stop - start
        idx = rng.integers(0, n, size=(rows, n))
        flat = idx + n * np.arange(rows)[:, None]
        counts[start:stop] = np.bincount(flat.ravel(), minlength=rows * n).reshape(rows, n)
    return counts


def bootstrap_means(Z: np.ndarray, n_resamples: int, seed: int) -> np.ndarray:
    """Resampled column means, shape (n_resamples, k)."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    counts = _bootstrap_counts(Z.shape[0], n_resamples, seed)
    return counts @ Z / Z.shape[0]


def mean_bounds(Z, method: CiMethod, alpha: float, side=Side.TWO_SIDED, bounds=(0.0, 1.0)):
    """Column-wise interval endpoints for the means of ``Z`` (shape (n,) or (n, k)).

    Returns ``(lo, hi)`` arrays of shape (k,), clamped to ``bounds``. For
    one-sided intervals the open end equals the corresponding bound.
    """
    _check_alpha(alpha)
    side = Side(side)
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    n = Z.shape[0]
    if n == 0:
        raise ValueError("samples must be nonempty")
    b_lo, b_hi = map(float, bounds)
    width = b_hi - b_lo
    if not width > 0:
        raise ValueError(f"invalid bounds {bounds}")
    if method.finite_sample and (Z.min() < b_lo - 1e-12 or Z.max() > b_hi + 1e-12):
        raise ValueError(f"samples fall outside the declared range {bounds}")
    if not method.finite_sample and n < 30:
        warnings.warn(f"{method.kind.value} interval with only n={n} samples", stacklevel=2)

    mean = Z.mean(axis=0)
    a_tail = alpha / 2.0 if side is Side.TWO_SIDED else alpha
    kind = method.kind
    if kind is Method.HOEFFDING:
        hw = np.full_like(mean, width * hoeffding_halfwidth(n, alpha, side))
        lo_raw, hi_raw = mean - hw, mean + hw
    elif kind is Method.BERNSTEIN:
        if method.variance == "known":
            s2 = np.full_like(mean, method.sigma2 / width**2)
        else:
            s2 = ((Z - b_lo) / width).var(axis=0, ddof=1 if n > 1 else 0)
        hw = width * bernstein_halfwidth(n, s2, method.bound, a_tail)
        lo_raw, hi_raw = mean - hw, mean + hw
    elif kind is Method.CLT:
        sd = Z.std(axis=0, ddof=1) if n > 1 else np.zeros_like(mean)
        hw = norm.ppf(1.0 - a_tail) * sd / math.sqrt(n)
        lo_raw, hi_raw = mean - hw, mean + hw
    else:
        boots = bootstrap_means(Z, method.n_resamples, method.seed)
        lo_raw = np.quantile(boots, a_tail, axis=0)
        hi_raw = np.quantile(boots, 1.0 - a_tail, axis=0)

    lo = np.clip(lo_raw, b_lo, b_hi)
    hi = np.clip(hi_raw, b_lo, b_hi)
    if side is Side.LOWER:
        hi = np.full_like(lo, b_hi)
    elif side is Side.UPPER:
        lo = np.full_like(hi, b_lo)
    return lo, hi


def mean_ci(samples, method: CiMethod, alpha: float, side=Side.TWO_SIDED,
            bounds=(0.0, 1.0)) -> Interval:
    samples = np.asarray(samples, dtype=float).ravel()
    lo, hi = mean_bounds(samples, method, alpha, side, bounds)
    return Interval(float(lo[0]), float(hi[0]), 1.0 - alpha, Side(side))


def coverage_simulation(true_mean, sampler, method: CiMethod, alpha, reps, seed,
                        side=Side.TWO_SIDED, bounds=(0.0, 1.0)) -> float:
    """Fraction of ``reps`` intervals that contain ``true_mean``.

    ``sampler(rng)`` draws one sample vector; rep ``i`` uses the generator
    seeded by ``(seed, i)`` and, for the bootstrap, resample seed derived the same way.
    """
    if reps < 100:
        raise ValueError("coverage simulation needs reps >= 100")
    hits = 0
    for i in range(reps):
        rng = np.random.default_rng([seed, i])
        z = sampler(rng)
        m = method.with_seed(int(rng.integers(2**63 - 1))) if method.kind is Method.BOOTSTRAP else method
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            iv = mean_ci(z, m, alpha, side, bounds)
        hits += iv.lo <= true_mean <= iv.hi
    return hits / reps
