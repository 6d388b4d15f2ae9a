import math
from decimal import Decimal, getcontext

import numpy as np
import pytest

from fairband.ci_mean import (CiMethod, Interval, Method, Side, bernstein_halfwidth, coverage_simulation,
                              hoeffding_halfwidth, mean_ci)


def _bern(p, n):
    return lambda rng: (rng.random(n) < p).astype(float)


def test_hoeffding_closed_form():
    assert hoeffding_halfwidth(2000, 0.05) == pytest.approx(0.030368, abs=5e-7)
    assert hoeffding_halfwidth(2000, 0.05, Side.LOWER) == pytest.approx(math.sqrt(math.log(20) / 4000), abs=1e-15)


def test_hoeffding_interval_is_mean_plus_minus_halfwidth():
    z = np.r_[np.ones(700), np.zeros(1300)]
    iv = mean_ci(z, CiMethod("hoeffding"), 0.05)
    d = hoeffding_halfwidth(2000, 0.05)
    assert (iv.lo, iv.hi) == pytest.approx((0.35 - d, 0.35 + d), abs=1e-15)
    assert iv.level == 0.95 and iv.side is Side.TWO_SIDED


def test_bootstrap_constant_samples():
    iv = mean_ci(np.full(200, 0.7), CiMethod("bootstrap", n_resamples=500, seed=3), 0.05)
    assert iv.lo == pytest.approx(0.7) and iv.hi == pytest.approx(0.7)


def test_clt_halfwidth():
    z = np.r_[np.ones(5000), np.zeros(5000)]
    iv = mean_ci(z, CiMethod("clt"), 0.05)
    sd = z.std(ddof=1)
    assert iv.hi - 0.5 == pytest.approx(1.959964 * sd / 100, rel=1e-6)
    assert iv.hi - 0.5 == pytest.approx(0.0098, abs=1e-4)


def test_bernstein_quadratic_oracle():
    getcontext().prec = 50
    n, s2, B, alpha = Decimal(1000), Decimal("0.25"), Decimal(1), Decimal("0.05")
    L = (1 / alpha).ln()
    p = 2 * B / 3 * L
    t = (p + (p * p + 8 * n * s2 * L).sqrt()) / 2
    assert float(t) == pytest.approx(39.71, abs=0.01)
    assert bernstein_halfwidth(1000, 0.25, 1.0, 0.05) == pytest.approx(float(t / n), abs=1e-15)
    assert bernstein_halfwidth(1000, 0.25, 1.0, 0.05) == pytest.approx(0.0397, abs=1e-4)


def test_bernstein_zero_variance():
    hw = bernstein_halfwidth(500, 0.0, 1.0, 0.05)
    assert hw == pytest.approx((2.0 / 3.0) * math.log(20) / 500, rel=1e-14)


def test_bernstein_alpha_to_one():
    assert bernstein_halfwidth(500, 0.25, 1.0, 1 - 1e-12) < 1e-5


def test_one_sided_open_ends():
    z = np.r_[np.ones(30), np.zeros(70)]
    lo = mean_ci(z, CiMethod(), 0.05, Side.LOWER)
    up = mean_ci(z, CiMethod(), 0.05, Side.UPPER)
    assert lo.hi == 1.0 and up.lo == 0.0
    assert lo.lo == pytest.approx(0.3 - math.sqrt(math.log(20) / 200))


def test_clamped_to_unit_interval():
    iv = mean_ci(np.ones(10), CiMethod(), 0.05)
    assert iv.hi == 1.0 and iv.lo > 0.5


@pytest.mark.parametrize("bad", [[], [0.5, 1.2], [-0.1]])
def test_bounded_methods_reject_bad_samples(bad):
    with pytest.raises(ValueError):
        mean_ci(bad, CiMethod("hoeffding"), 0.05)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5])
def test_alpha_range(alpha):
    with pytest.raises(ValueError):
        mean_ci([0.5], CiMethod(), alpha)


def test_method_validation():
    with pytest.raises(ValueError):
        CiMethod("bootstrap", n_resamples=50)
    with pytest.raises(ValueError):
        CiMethod("bernstein", bound=0.0)
    with pytest.raises(ValueError):
        CiMethod("bernstein", variance="known")


def test_small_sample_warning():
    with pytest.warns(UserWarning):
        mean_ci([0, 1, 1], CiMethod("clt"), 0.05)


def test_interval_invariant():
    with pytest.raises(ValueError):
        Interval(0.5, 0.4, 0.95)


def test_width_ordering_low_variance():
    z = (np.random.default_rng(2).random(1000) < 0.05).astype(float)
    b = mean_ci(z, CiMethod("bernstein"), 0.05)
    h = mean_ci(z, CiMethod("hoeffding"), 0.05)
    assert b.width < h.width


@pytest.mark.parametrize("kind", ["hoeffding", "bernstein"])
def test_monotone_in_n_and_alpha(kind):
    f = (lambda n, a: hoeffding_halfwidth(n, a)) if kind == "hoeffding" else (lambda n, a: bernstein_halfwidth(n, 0.2, 1, a))
    ns = [10, 100, 1000, 10000]
    assert all(f(u, 0.05) > f(v, 0.05) for u, v in zip(ns, ns[1:]))
    alphas = [0.2, 0.1, 0.05, 0.01]
    assert all(f(100, u) < f(100, v) for u, v in zip(alphas, alphas[1:]))


def test_clt_monotone_in_n():
    widths = [mean_ci(np.r_[np.ones(n), np.zeros(n)], CiMethod("clt"), 0.05).width for n in (50, 500, 5000)]
    assert widths[0] > widths[1] > widths[2]


def test_bootstrap_determinism():
    z = np.random.default_rng(0).random(300)
    m = CiMethod("bootstrap", n_resamples=400, seed=9)
    assert mean_ci(z, m, 0.05) == mean_ci(z, m, 0.05)
    assert mean_ci(z, m, 0.05) != mean_ci(z, m.with_seed(10), 0.05)


def test_known_variance_bernstein():
    z = (np.random.default_rng(1).random(400) < 0.3).astype(float)
    iv = mean_ci(z, CiMethod("bernstein", variance="known", sigma2=0.21), 0.05, Side.LOWER)
    assert iv.lo == pytest.approx(max(0.0, z.mean() - bernstein_halfwidth(400, 0.21, 1.0, 0.05)))


def test_coverage_examples():
    assert coverage_simulation(0.3, _bern(0.3, 500), CiMethod("hoeffding"), 0.05, 1000, 0) >= 0.95
    clt = coverage_simulation(0.3, _bern(0.3, 500), CiMethod("clt"), 0.05, 1000, 0)
    assert 0.93 <= clt <= 0.97
    assert coverage_simulation(0.3, _bern(0.3, 500), CiMethod("hoeffding"), 0.5, 200, 0) >= 0.5


def test_coverage_requires_reps():
    with pytest.raises(ValueError):
        coverage_simulation(0.3, _bern(0.3, 5), CiMethod(), 0.05, 10, 0)
