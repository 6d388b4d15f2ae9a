import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.special import expit

from fairband.metrics import (FairnessMetric, SurrogateKind, UndefinedStratumError, accuracy, decompose,
                              surrogate_gradient, surrogate_loss, violation)
from fairband.oracle import brute_force_violation

METRICS = list(FairnessMetric)
KINDS = list(SurrogateKind)


def _defined(metric, a, y):
    a, y = np.asarray(a), np.asarray(y)
    need = {FairnessMetric.DP: [None], FairnessMetric.EOP: [1], FairnessMetric.EO: [1, 0]}[metric]
    for label in need:
        base = np.ones(len(a), bool) if label is None else y == label
        if not ((base & (a == 1)).any() and (base & (a == 0)).any()):
            return False
    return True


def test_accuracy_examples():
    assert accuracy([1, 0, 1], [1, 0, 1]) == 1.0
    assert accuracy([1, 1, 1, 1], [1, 0, 1, 0]) == 0.5
    with pytest.raises(ValueError):
        accuracy([], [])
    with pytest.raises(ValueError):
        accuracy([1, 0], [1])


def test_dp_hand_example():
    assert violation("dp", [1, 0, 1, 1], [1, 1, 0, 0], [0, 0, 0, 0]) == 0.5


def test_identical_group_distributions_give_zero():
    assert violation("dp", [1, 0, 1, 0], [1, 1, 0, 0], [1, 0, 1, 0]) == 0.0


def test_eop_missing_stratum():
    with pytest.raises(UndefinedStratumError):
        violation("eop", [1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 1, 1])


def test_eo_is_half_sum():
    preds = np.array([1, 1, 0, 0, 1, 0, 0, 0])
    a = np.array([1, 1, 1, 1, 0, 0, 0, 0])
    y = np.array([1, 0, 1, 0, 1, 0, 1, 0])
    # TPR 0.5 vs 0.5, FPR 0.5 vs 0
    assert violation("eo", preds, a, y) == pytest.approx(0.25)


def test_vectorized_columns():
    rng = np.random.default_rng(0)
    P = rng.integers(0, 2, (40, 5))
    a, y = rng.integers(0, 2, 40), rng.integers(0, 2, 40)
    out = violation("eo", P, a, y)
    assert out.shape == (5,)
    for j in range(5):
        assert out[j] == violation("eo", P[:, j], a, y)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(METRICS), st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)),
                                          min_size=2, max_size=20))
def test_range_and_relabel_symmetry(metric, rows):
    p, a, y = map(np.array, zip(*rows))
    assume(_defined(metric, a, y))
    v = violation(metric, p, a, y)
    assert 0.0 <= v <= 1.0
    assert violation(metric, p, 1 - a, y) == pytest.approx(v, abs=1e-15)


def test_decompose_shapes():
    d = decompose("dp")
    assert d.m == 2
    assert {(t.a, t.y) for t in d.terms} == {(1, None), (0, None)}
    assert d.terms[0].coef == 1.0 and d.terms[1].coef == -1.0
    assert {(t.a, t.y) for t in decompose("eop").terms} == {(1, 1), (0, 1)}
    eo = decompose("eo")
    assert eo.m == 4 and eo.n_strata == 2
    assert all(abs(t.coef) == 0.5 for t in eo.terms)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(METRICS), st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=2, max_size=8))
def test_decomposition_matches_exhaustively(metric, rows):
    a, y = map(np.array, zip(*rows))
    assume(_defined(metric, a, y))
    d = decompose(metric)
    for p in itertools.product((0, 1), repeat=len(a)):
        assert d.evaluate(np.array(p), a, y) == pytest.approx(violation(metric, p, a, y), abs=1e-12)


def test_brute_force_agrees_on_errors():
    a, y, p = [1, 1, 1], [0, 1, 0], [1, 0, 1]
    with pytest.raises(UndefinedStratumError):
        violation("dp", p, a, y)
    with pytest.raises(ValueError):
        brute_force_violation("dp", a, y, p)


def test_brute_force_smallest_eo():
    a, y, p = [1, 0, 1, 0], [1, 1, 0, 0], [1, 0, 0, 1]
    assert violation("eo", p, a, y) == brute_force_violation("eo", a, y, p) == 1.0


def test_sigmoid_abs_examples():
    assert surrogate_loss("sigmoid_abs", "dp", [0.3, 0.3, 0.3, 0.3], [1, 0, 1, 0], [1, 1, 0, 0]) == 0.0
    expected = expit(10) - expit(-10)
    assert surrogate_loss("sigmoid_abs", "dp", [10.0, -10.0], [1, 0], [0, 0]) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.99991, abs=1e-5)


def test_linear_is_signed_mean_gap():
    assert surrogate_loss("linear", "dp", [2.0, 0.0], [1, 0], [0, 0]) == 2.0
    assert surrogate_loss("linear", "dp", [0.0, 2.0], [1, 0], [0, 0]) == -2.0


def test_gradient_zero_at_symmetric_point():
    g = surrogate_gradient("sigmoid_abs", "dp", np.zeros(4), [1, 0, 1, 0], [0, 0, 1, 1])
    np.testing.assert_array_equal(g, 0.0)


def test_single_sample_gradient():
    s = np.array([0.7, -0.2])
    g = surrogate_gradient("sigmoid_abs", "dp", s, [1, 0], [0, 0])
    d = expit(s) * (1 - expit(s))
    np.testing.assert_allclose(g, [d[0], -d[1]], rtol=1e-14)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("metric", METRICS)
def test_gradient_finite_differences(kind, metric):
    rng = np.random.default_rng([KINDS.index(kind), METRICS.index(metric)])
    h = 1e-6
    for _ in range(100 // (len(KINDS) * len(METRICS)) + 1):
        n = int(rng.integers(6, 30))
        a = np.r_[[1, 0, 1, 0], rng.integers(0, 2, n - 4)]
        y = np.r_[[1, 1, 0, 0], rng.integers(0, 2, n - 4)]
        s = rng.normal(0, 2, n)
        g = surrogate_gradient(kind, metric, s, a, y)
        fd = np.array([(surrogate_loss(kind, metric, s + h * e, a, y) - surrogate_loss(kind, metric, s - h * e, a, y))
                       / (2 * h) for e in np.eye(n)])
        np.testing.assert_allclose(g, fd, rtol=1e-4, atol=1e-8)


@pytest.mark.parametrize("metric", METRICS)
def test_sigmoid_abs_saturates_to_hard_violation(metric):
    rng = np.random.default_rng(1)
    n = 200
    a, y = rng.integers(0, 2, n), rng.integers(0, 2, n)
    pred = rng.integers(0, 2, n)
    scores = 1e3 * np.where(pred == 1, 1.0, -1.0)
    hard = violation(metric, pred, a, y)
    # the surrogate sums strata without the 1/2 weights, so EO saturates at twice the violation
    scale = 2.0 if metric is FairnessMetric.EO else 1.0
    assert surrogate_loss("sigmoid_abs", metric, scores, a, y) == pytest.approx(scale * hard, abs=1e-3)


def test_surrogate_empty_stratum():
    with pytest.raises(UndefinedStratumError):
        surrogate_loss("sigmoid_abs", "eo", [0.0, 1.0], [1, 0], [1, 1])
