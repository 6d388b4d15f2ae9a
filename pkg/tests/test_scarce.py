import numpy as np
import pytest

from fairband.ci_fairness import SignedInterval, fairness_ci
from fairband.ci_mean import CiMethod, Interval
from fairband.data import MISSING, Dataset, SyntheticConfig, generate_synthetic
from fairband.metrics import UndefinedStratumError
from fairband.scarce import (ImputationWarning, ScarcePartition, combined_ci, epsilon_ci_bootstrap,
                             naive_imputed_ci, scarce_report, tilde_fairness_ci)
from scarce_sim import coverage, draw

HOEFF = CiMethod("hoeffding")


def test_perfect_surrogate_gives_zero_epsilon():
    d, _, h, lab = draw(0, 1.0)
    eps = epsilon_ci_bootstrap(d.a[lab], d.a[lab], d.y[lab], h[lab], "dp", 500, 0.05, 1)
    assert (eps.lo, eps.hi) == (0.0, 0.0)


def test_single_resample_warns():
    d, a_hat, h, lab = draw(1, 0.7)
    with pytest.warns(UserWarning, match="single bootstrap"):
        eps = epsilon_ci_bootstrap(d.a[lab], a_hat[lab], d.y[lab], h[lab], "dp", 1, 0.05, 0)
    assert eps.lo == eps.hi


def test_epsilon_width_shrinks_with_labeled_size():
    widths = {}
    for n in (50, 500):
        w = []
        for r in range(20):
            d, a_hat, h, lab = draw(r, 0.7, n_labeled=n, n_unlabeled=10)
            eps = epsilon_ci_bootstrap(d.a[lab], a_hat[lab], d.y[lab], h[lab], "dp", 500, 0.05, r)
            w.append(eps.hi - eps.lo)
        widths[n] = np.median(w)
    assert widths[500] < widths[50]


def test_epsilon_deterministic():
    d, a_hat, h, lab = draw(2, 0.7)
    args = (d.a[lab], a_hat[lab], d.y[lab], h[lab], "eo", 300, 0.05, 9)
    assert epsilon_ci_bootstrap(*args) == epsilon_ci_bootstrap(*args)


def test_epsilon_redraw_cap(monkeypatch):
    # a single row of group 1 is missed by about a third of the resamples
    monkeypatch.setattr("fairband.scarce.MAX_REDRAWS", 0)
    a = np.r_[1, np.zeros(199, dtype=int)]
    y = np.zeros(200, dtype=int)
    h = np.random.default_rng(0).integers(0, 2, 200)
    with pytest.raises(UndefinedStratumError):
        epsilon_ci_bootstrap(a, a, y, h, "dp", 200, 0.05, 0)


def test_tilde_delegates_to_fairness_ci():
    d, a_hat, h, _ = draw(3, 0.7)
    t = tilde_fairness_ci(a_hat, d.y, h, "dp", HOEFF, 0.05)
    ref = fairness_ci("dp", h, a_hat, d.y, HOEFF, 0.05, "union")
    assert t == ref


def test_tilde_large_set_is_tighter():
    d, a_hat, h, _ = draw(4, 0.7, n_labeled=50, n_unlabeled=2500)
    big = tilde_fairness_ci(a_hat[:2500], d.y[:2500], h[:2500], "dp", HOEFF, 0.05)
    small = tilde_fairness_ci(a_hat[:50], d.y[:50], h[:50], "dp", HOEFF, 0.05)
    assert big.width < small.width


def test_tilde_one_class_surrogate():
    with pytest.raises(UndefinedStratumError):
        tilde_fairness_ci(np.ones(10), np.zeros(10), np.zeros(10), "dp", HOEFF, 0.05)


@pytest.mark.parametrize("eps, tilde, expected", [
    ((0.0, 0.0), (0.1, 0.3), (0.1, 0.3)),
    ((-0.05, 0.02), (0.10, 0.20), (0.05, 0.22)),
    ((-0.5, 0.0), (0.1, 0.2), (0.0, 0.2)),
])
def test_combined_examples(eps, tilde, expected):
    c = combined_ci(SignedInterval(*eps, 0.95), Interval(*tilde, 0.95))
    assert (c.lo, c.hi) == pytest.approx(expected)
    assert c.level == pytest.approx(0.90)


def test_combined_level_mismatch():
    with pytest.raises(ValueError):
        combined_ci(SignedInterval(0, 0, 0.9), Interval(0, 1, 0.95))


def test_naive_warns_and_matches_oracle_when_perfect():
    d, _, h, lab = draw(5, 1.0)
    a_obs = np.where(lab, d.a, MISSING)
    with pytest.warns(ImputationWarning):
        naive = naive_imputed_ci(a_obs, d.a, d.y, h, "dp", HOEFF, 0.05)
    assert naive == fairness_ci("dp", h, d.a, d.y, HOEFF, 0.05)


def test_perfect_surrogate_report_degenerates_to_tilde():
    d, _, h, lab = draw(6, 1.0)
    data = Dataset(d.X, np.where(lab, d.a, MISSING), d.y)
    part = ScarcePartition.from_dataset(data, d.a)
    assert part.n_labeled == 50 and part.n_unlabeled == 2000
    rep = scarce_report(part, h[lab], h[~lab], "dp", HOEFF, 0.05, 300, 0)
    assert (rep.corrected.lo, rep.corrected.hi) == (rep.tilde.lo, rep.tilde.hi)
    assert rep.to_dict()["corrected"]["level"] == pytest.approx(0.9)


def test_partition_validation():
    data = generate_synthetic(SyntheticConfig(), 10)
    with pytest.raises(ValueError):
        ScarcePartition.from_dataset(data, np.zeros(9))
    with pytest.raises(ValueError):
        ScarcePartition.from_dataset(data, np.full(10, 2))


@pytest.mark.parametrize("p", [0.5, 0.9])
def test_correction_validity(p):
    comb, naive = coverage(p)
    assert comb >= 0.88


def test_naive_miscalibration_and_recovery():
    _, naive_bad = coverage(0.5, reps=500)
    _, naive_good = coverage(0.9, reps=500)
    assert naive_bad < 0.90
    assert naive_good > naive_bad


def test_epsilon_redraws_recover():
    a = np.r_[1, np.zeros(199, dtype=int)]
    y = np.zeros(200, dtype=int)
    h = np.r_[1, np.zeros(199, dtype=int)]
    eps = epsilon_ci_bootstrap(a, a, y, h, "dp", 200, 0.05, 0)
    assert (eps.lo, eps.hi) == (0.0, 0.0)
