"""Datasets of (features, sensitive attribute, label) triples.

The sensitive attribute is stored per row as 0/1, or ``MISSING`` (-1) when the
row does not carry it. Scarce-attribute workflows use the same container.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

MISSING = -1


class DataError(ValueError):
    """Malformed input data (bad CSV cell, schema mismatch, invalid labels)."""


@dataclass(frozen=True)
class Sample:
    x: np.ndarray
    a: int | None
    y: int


@dataclass
class Dataset:
    """Column-oriented dataset.

    ``X`` has shape (n, d); ``a`` holds 0, 1 or ``MISSING``; ``y`` holds 0/1.
    """

    X: np.ndarray
    a: np.ndarray
    y: np.ndarray
    feature_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        a = np.asarray(self.a, dtype=np.int64).ravel()
        y = np.asarray(self.y, dtype=np.int64).ravel()
        if X.ndim != 2 or X.shape[0] == 0:
            raise DataError("dataset must be nonempty with 2-D features")
        if X.shape[1] == 0:
            raise DataError("feature_dim must be positive")
        if not (len(a) == len(y) == X.shape[0]):
            raise DataError(
                f"length mismatch: X has {X.shape[0]} rows, a {len(a)}, y {len(y)}"
            )
        if not np.all(np.isfinite(X)):
            raise DataError("features must be finite")
        if not np.all((y == 0) | (y == 1)):
            raise DataError("labels must be 0 or 1")
        if not np.all((a == 0) | (a == 1) | (a == MISSING)):
            raise DataError("sensitive attribute must be 0, 1 or missing")
        self.X, self.a, self.y = X, a, y
        if not self.feature_names:
            self.feature_names = [f"x{j}" for j in range(X.shape[1])]

    def __len__(self):
        return self.X.shape[0]

    def __getitem__(self, i) -> Sample:
        a = int(self.a[i])
        return Sample(self.X[i].copy(), None if a == MISSING else a, int(self.y[i]))

    @property
    def feature_dim(self) -> int:
        return self.X.shape[1]

    @property
    def has_attribute(self) -> np.ndarray:
        return self.a != MISSING

    @classmethod
    def from_samples(cls, samples: Sequence[Sample]) -> "Dataset":
        if not samples:
            raise DataError("dataset must be nonempty")
        X = np.vstack([np.atleast_1d(np.asarray(s.x, dtype=float)) for s in samples])
        a = [MISSING if s.a is None else s.a for s in samples]
        return cls(X, a, [s.y for s in samples])

    def subset(self, index) -> "Dataset":
        index = np.asarray(index)
        return Dataset(self.X[index], self.a[index], self.y[index], list(self.feature_names))

    def require_attribute(self, what: str = "this operation"):
        if not np.all(self.has_attribute):
            raise DataError(f"{what} needs the sensitive attribute on every row")


@dataclass(frozen=True)
class SyntheticConfig:
    """Parameters of the one-dimensional two-group generator.

    A ~ Bern(group_prob); X | A=a ~ N(group_means[a], noise_sd^2);
    Y = 1(X > label_threshold) with probability label_flip_keep, else flipped.
    """

    group_prob: float = 0.5
    group_means: tuple[float, float] = (0.0, 1.0)
    noise_sd: float = 0.2
    label_flip_keep: float = 0.9
    label_threshold: float = 0.5
    seed: int = 0

    def __post_init__(self):
        for name in ("group_prob", "label_flip_keep"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if not self.noise_sd > 0:
            raise ValueError(f"noise_sd must be positive, got {self.noise_sd}")
        if len(self.group_means) != 2 or not all(map(math.isfinite, self.group_means)):
            raise ValueError("group_means must be two finite reals")
        if not math.isfinite(self.label_threshold):
            raise ValueError("label_threshold must be finite")

    def is_default_mechanism(self) -> bool:
        return (self.group_prob, tuple(self.group_means), self.noise_sd,
                self.label_flip_keep, self.label_threshold) == (0.5, (0.0, 1.0), 0.2, 0.9, 0.5)


def generate_synthetic(config: SyntheticConfig, n: int) -> Dataset:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    rng = np.random.default_rng(config.seed)
    a = (rng.random(n) < config.group_prob).astype(np.int64)
    means = np.asarray(config.group_means, dtype=float)
    x = means[a] + config.noise_sd * rng.standard_normal(n)
    keep = rng.random(n) < config.label_flip_keep
    above = x > config.label_threshold
    y = np.where(keep, above, ~above).astype(np.int64)
    return Dataset(x[:, None], a, y, ["x"])


@dataclass
class CsvSchema:
    features: list[str]
    label: str
    sensitive: str | None = None
    categorical: list[str] = field(default_factory=list)

    def __post_init__(self):
        unknown = set(self.categorical) - set(self.features)
        if unknown:
            raise DataError(f"categorical columns not among features: {sorted(unknown)}")
        if not self.features:
            raise DataError("schema needs at least one feature column")


def _parse_binary(value: str, column: str, row: int) -> int:
    v = value.strip()
    try:
        f = float(v)
    except ValueError:
        raise DataError(f"row {row}: column {column!r} value {value!r} is not binary") from None
    if f not in (0.0, 1.0):
        raise DataError(f"row {row}: column {column!r} value {value!r} is not binary")
    return int(f)


def load_csv(path: str | Path, schema: CsvSchema) -> Dataset:
    """Read a headered UTF-8 CSV into a :class:`Dataset`.

    Categorical feature columns are one-hot encoded with levels in sorted
    order; an empty sensitive cell marks the attribute missing for that row.
    Row numbers in error messages count data rows from 1 (header excluded).
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: missing header row")
        header = [h.strip() for h in reader.fieldnames]
        reader.fieldnames = header
        needed = list(schema.features) + [schema.label]
        if schema.sensitive is not None:
            needed.append(schema.sensitive)
        missing = [c for c in needed if c not in header]
        if missing:
            raise DataError(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise DataError(f"{path}: no data rows")

    levels = {c: sorted({r[c].strip() for r in rows}) for c in schema.categorical}
    names: list[str] = []
    for c in schema.features:
        if c in levels:
            names.extend(f"{c}={lv}" for lv in levels[c])
        else:
            names.append(c)

    X = np.empty((len(rows), len(names)))
    a = np.empty(len(rows), dtype=np.int64)
    y = np.empty(len(rows), dtype=np.int64)
    for i, r in enumerate(rows):
        rownum = i + 1
        out = []
        for c in schema.features:
            cell = r[c] if r[c] is not None else ""
            if c in levels:
                out.extend(1.0 if cell.strip() == lv else 0.0 for lv in levels[c])
                continue
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"row {rownum}: column {c!r} value {cell!r} is not numeric") from None
            if not math.isfinite(v):
                raise DataError(f"row {rownum}: column {c!r} value {cell!r} is not finite")
            out.append(v)
        X[i] = out
        y[i] = _parse_binary(r[schema.label] or "", schema.label, rownum)
        if schema.sensitive is None or (r[schema.sensitive] or "").strip() == "":
            a[i] = MISSING
        else:
            a[i] = _parse_binary(r[schema.sensitive], schema.sensitive, rownum)
    return Dataset(X, a, y, names)


def write_csv(data: Dataset, path: str | Path, sensitive: str = "a", label: str = "y"):
    """Write a dataset with its feature names as header; missing attributes become empty cells."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(data.feature_names) + [sensitive, label])
        for xi, ai, yi in zip(data.X, data.a, data.y):
            w.writerow([repr(float(v)) for v in xi] + ["" if ai == MISSING else int(ai), int(yi)])


def split(data: Dataset, fractions: Sequence[float], seed: int):
    """Partition ``data`` into (train, cal, test) by a seeded permutation.

    Calibration and test sizes are ``round(fraction * N)``; the remainder goes
    to training.
    """
    if len(fractions) != 3:
        raise ValueError("fractions must be (train, cal, test)")
    f_train, f_cal, f_test = map(float, fractions)
    for f in (f_train, f_cal, f_test):
        if not 0.0 < f < 1.0:
            raise ValueError(f"each fraction must lie in (0, 1), got {fractions}")
    if abs(f_train + f_cal + f_test - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {fractions}")
    N = len(data)
    n_cal, n_test = round(f_cal * N), round(f_test * N)
    n_train = N - n_cal - n_test
    if min(n_train, n_cal, n_test) < 1:
        raise ValueError(f"fractions {fractions} leave an empty split for N={N}")
    perm = np.random.default_rng(seed).permutation(N)
    return (
        data.subset(perm[:n_train]),
        data.subset(perm[n_train:n_train + n_cal]),
        data.subset(perm[n_train + n_cal:]),
    )


class Standardizer:
    """Zero-mean / unit-variance scaling fitted on training features only.

    Columns that are constant in the training split are left unscaled.
    """

    def __init__(self, mean=None, scale=None):
        self.mean_ = None if mean is None else np.asarray(mean, dtype=float)
        self.scale_ = None if scale is None else np.asarray(scale, dtype=float)

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        self.mean_ = X.mean(axis=0)
        sd = X.std(axis=0)
        self.scale_ = np.where(sd > 0, sd, 1.0)
        return self

    def transform(self, X):
        if self.mean_ is None:
            raise RuntimeError("Standardizer is not fitted")
        return (np.asarray(X, dtype=float) - self.mean_) / self.scale_

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)

    def apply(self, data: Dataset) -> Dataset:
        return Dataset(self.transform(data.X), data.a, data.y, list(data.feature_names))
