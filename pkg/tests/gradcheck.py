"""Central finite-difference reference for the model gradient."""

import numpy as np

from fairband.metrics import FairnessMetric, SurrogateKind
from fairband.model import LinearFilmModel


def random_problem(seed):
    """A random (model, X, a, y, lam, metric, surrogate) configuration."""
    rng = np.random.default_rng(seed)
    d, n = int(rng.integers(1, 5)), int(rng.integers(8, 40))
    model = LinearFilmModel.init(d, seed=seed)
    model.w = rng.normal(0, 1, d)
    model.b = float(rng.normal())
    X = rng.normal(0, 1, (n, d))
    a = np.r_[[1, 0, 1, 0], rng.integers(0, 2, n - 4)]
    y = np.r_[[1, 1, 0, 0], rng.integers(0, 2, n - 4)]
    lam = float(np.exp(rng.uniform(np.log(1e-6), np.log(10))))
    metric = list(FairnessMetric)[seed % 3]
    surrogate = list(SurrogateKind)[seed % 3]
    return model, X, a, y, lam, metric, surrogate


def finite_difference(model, X, a, y, lam, metric, surrogate, h=1e-6):
    flat = model.get_flat()
    out = np.zeros_like(flat)
    for i in range(flat.size):
        e = np.zeros_like(flat)
        e[i] = h
        model.set_flat(flat + e)
        up = model.objective(X, a, y, lam, metric, surrogate)
        model.set_flat(flat - e)
        down = model.objective(X, a, y, lam, metric, surrogate)
        out[i] = (up - down) / (2 * h)
    model.set_flat(flat)
    return out


def per_parameter_errors(model, analytic, numeric):
    """{name: (relative error, max absolute error)} for each parameter tensor."""
    out, i = {}, 0
    for name in model.param_names():
        k = np.size(model.get_param(name))
        g, f = analytic[i:i + k], numeric[i:i + k]
        i += k
        scale = max(np.linalg.norm(g), np.linalg.norm(f))
        rel = 0.0 if scale == 0 else float(np.linalg.norm(g - f) / scale)
        out[name] = (rel, float(np.abs(g - f).max()))
    return out
