"""Redraw simulation for scarce-attribute intervals on synthetic data."""

import warnings

import numpy as np

from fairband.ci_mean import CiMethod
from fairband.data import MISSING, SyntheticConfig, generate_synthetic
from fairband.oracle import analytic_point
from fairband.scarce import combined_ci, epsilon_ci_bootstrap, naive_imputed_ci, tilde_fairness_ci

THRESHOLD = 0.0  # classifier 1(x > 0)


def true_dp():
    return analytic_point("dp", THRESHOLD)[1]


def draw(r, surrogate_accuracy, n_labeled=50, n_unlabeled=2000):
    """One calibration draw: data, noisy surrogate attribute, predictions, labeled mask."""
    d = generate_synthetic(SyntheticConfig(seed=5000 + r), n_labeled + n_unlabeled)
    rng = np.random.default_rng([7, r])
    a_hat = np.where(rng.random(len(d)) < surrogate_accuracy, d.a, 1 - d.a)
    h = (d.X[:, 0] > THRESHOLD).astype(int)
    labeled = np.arange(len(d)) < n_labeled
    return d, a_hat, h, labeled


def coverage(surrogate_accuracy, reps=500, n_labeled=50, n_unlabeled=2000, alpha=0.05, n_boot=1000):
    """(combined coverage, naive coverage) of the true DP over ``reps`` redraws."""
    truth = true_dp()
    method = CiMethod("hoeffding")
    hit_c = hit_n = 0
    for r in range(reps):
        d, a_hat, h, lab = draw(r, surrogate_accuracy, n_labeled, n_unlabeled)
        eps = epsilon_ci_bootstrap(d.a[lab], a_hat[lab], d.y[lab], h[lab], "dp", n_boot, alpha, r)
        tilde = tilde_fairness_ci(a_hat[~lab], d.y[~lab], h[~lab], "dp", method, alpha)
        comb = combined_ci(eps, tilde)
        a_obs = np.where(lab, d.a, MISSING)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            naive = naive_imputed_ci(a_obs, a_hat, d.y, h, "dp", method, alpha)
        hit_c += comb.lo <= truth <= comb.hi
        hit_n += naive.lo <= truth <= naive.hi
    return hit_c / reps, hit_n / reps
