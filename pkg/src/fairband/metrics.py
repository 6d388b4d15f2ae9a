"""Accuracy, group-fairness violations and their smooth surrogates.

Every metric is a sum over *strata* of a signed gap between the two sensitive
groups: DP has the single stratum "all rows", EOP the stratum Y=1, and EO the
two strata Y=1 and Y=0 with weight 1/2 each. The exact violation is the
weighted sum of absolute stratum gaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit


class FairnessMetric(str, Enum):
    DP = "dp"
    EOP = "eop"
    EO = "eo"


class SurrogateKind(str, Enum):
    SIGMOID_ABS = "sigmoid_abs"
    LINEAR = "linear"
    LOGSIG = "logsig"


class UndefinedStratumError(ValueError):
    """A group/stratum needed by the metric has no rows, so the metric is undefined."""


# label value conditioning each stratum (None: unconditioned) and its weight
_STRATA = {
    FairnessMetric.DP: ((None, 1.0),),
    FairnessMetric.EOP: ((1, 1.0),),
    FairnessMetric.EO: ((1, 0.5), (0, 0.5)),
}


def stratum_weights(metric) -> np.ndarray:
    return np.array([w for _, w in _STRATA[FairnessMetric(metric)]])


def stratum_masks(metric, a, y):
    """Return ``[(mask_group1, mask_group0), ...]`` one pair per stratum.

    Raises :class:`UndefinedStratumError` if any of the masks is empty.
    """
    metric = FairnessMetric(metric)
    a = np.asarray(a)
    y = np.asarray(y)
    out = []
    for label, _ in _STRATA[metric]:
        base = np.ones(len(a), dtype=bool) if label is None else (y == label)
        m1, m0 = base & (a == 1), base & (a == 0)
        if not m1.any() or not m0.any():
            where = "" if label is None else f" among y={label}"
            raise UndefinedStratumError(
                f"{metric.name} is undefined: a sensitive group is empty{where}"
            )
        out.append((m1, m0))
    return out


def _check_lengths(*arrays):
    n = len(arrays[0])
    if n == 0:
        raise ValueError("inputs must be nonempty")
    if any(len(x) != n for x in arrays[1:]):
        raise ValueError(f"length mismatch: {[len(x) for x in arrays]}")


def accuracy(predictions, labels) -> float:
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    _check_lengths(predictions, labels)
    return float(np.mean(predictions == labels))


def stratum_gaps(metric, values, a, y) -> np.ndarray:
    """Signed per-stratum gaps ``mean(values | A=1, s) - mean(values | A=0, s)``.

    ``values`` may be 1-D (n,) or 2-D (n, k) to evaluate k classifiers at once;
    the result then has shape (n_strata, k).
    """
    values = np.asarray(values, dtype=float)
    masks = stratum_masks(metric, a, y)
    return np.array([values[m1].mean(axis=0) - values[m0].mean(axis=0) for m1, m0 in masks])


def violation(metric, predictions, a, y):
    """Exact empirical fairness violation of hard 0/1 predictions.

    DP: |P(h=1|A=1) - P(h=1|A=0)|; EOP: the same gap among Y=1; EO: half the
    TPR gap plus half the FPR gap. Accepts (n, k) predictions column-wise.
    """
    predictions = np.asarray(predictions)
    a = np.asarray(a)
    y = np.asarray(y)
    _check_lengths(predictions, a, y)
    gaps = stratum_gaps(metric, predictions, a, y)
    out = np.tensordot(stratum_weights(metric), np.abs(gaps), axes=1)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Term:
    """One summand ``coef * E[h(X) | A=a, Y=y]``; ``y`` None means unconditioned."""

    coef: float
    a: int
    y: int | None
    stratum: int

    def event(self, a, y) -> np.ndarray:
        a = np.asarray(a)
        mask = a == self.a
        if self.y is not None:
            mask &= np.asarray(y) == self.y
        return mask

    def g(self, predictions) -> np.ndarray:
        return self.coef * np.asarray(predictions, dtype=float)


@dataclass(frozen=True)
class TermDecomposition:
    """Signed term form of a metric: violation = sum over strata of |sum of that stratum's terms|."""

    metric: FairnessMetric
    terms: tuple[Term, ...]

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def n_strata(self) -> int:
        return len({t.stratum for t in self.terms})

    def stratum_terms(self, s: int) -> list[Term]:
        return [t for t in self.terms if t.stratum == s]

    def plug_in_terms(self, predictions, a, y) -> np.ndarray:
        vals = []
        for t in self.terms:
            ev = t.event(a, y)
            if not ev.any():
                raise UndefinedStratumError(f"empty event for term {t}")
            vals.append(t.g(np.asarray(predictions)[ev]).mean())
        return np.array(vals)

    def evaluate(self, predictions, a, y) -> float:
        vals = self.plug_in_terms(predictions, a, y)
        return float(sum(abs(sum(v for v, t in zip(vals, self.terms) if t.stratum == s))
                         for s in range(self.n_strata)))


def decompose(metric) -> TermDecomposition:
    metric = FairnessMetric(metric)
    terms = []
    for s, (label, w) in enumerate(_STRATA[metric]):
        terms.append(Term(w, 1, label, s))
        terms.append(Term(-w, 0, label, s))
    return TermDecomposition(metric, tuple(terms))


def _g(kind: SurrogateKind, s):
    if kind is SurrogateKind.LINEAR:
        return s, np.ones_like(s)
    if kind is SurrogateKind.LOGSIG:
        return -np.logaddexp(0.0, -s), expit(-s)
    p = expit(s)
    return p, p * (1.0 - p)


def _surrogate(kind, metric, scores, a, y, with_grad: bool):
    kind = SurrogateKind(kind)
    scores = np.asarray(scores, dtype=float)
    _check_lengths(scores, np.asarray(a), np.asarray(y))
    gs, dgs = _g(kind, scores)
    loss = 0.0
    grad = np.zeros_like(scores) if with_grad else None
    for m1, m0 in stratum_masks(metric, a, y):
        gap = gs[m1].mean() - gs[m0].mean()
        if kind is SurrogateKind.SIGMOID_ABS:
            loss += abs(gap)
            coef = np.sign(gap)
        else:
            loss += gap
            coef = 1.0
        if with_grad and coef != 0.0:
            grad[m1] += coef * dgs[m1] / m1.sum()
            grad[m0] -= coef * dgs[m0] / m0.sum()
    return float(loss), grad


def surrogate_loss(kind, metric, scores, a, y) -> float:
    """Smooth fairness penalty on logits.

    ``sigmoid_abs`` sums |E[sigmoid(s)|A=1,.] - E[sigmoid(s)|A=0,.]| over strata
    (unweighted, so EO counts both strata fully). ``linear`` (g(s)=s) and
    ``logsig`` (g(s)=log sigmoid(s)) are signed gaps without absolute value.
    """
    return _surrogate(kind, metric, scores, a, y, with_grad=False)[0]


def surrogate_gradient(kind, metric, scores, a, y) -> np.ndarray:
    """Analytic gradient of :func:`surrogate_loss` w.r.t. the scores (|.|' at 0 taken as 0)."""
    return _surrogate(kind, metric, scores, a, y, with_grad=True)[1]


def surrogate_loss_and_gradient(kind, metric, scores, a, y):
    return _surrogate(kind, metric, scores, a, y, with_grad=True)
