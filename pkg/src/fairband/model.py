"""Logistic regression whose logit is FiLM-modulated by the fairness weight lambda.

    logit(x, lambda) = scale(lambda) * (w . x + b) + shift(lambda)

``scale`` and ``shift`` are 1 -> 4 -> 4 -> 1 ReLU networks fed with
log10(lambda) rescaled to [0, 1] over the training range. Training with
lambda drawn per batch from a log-uniform law (``train_yoto``) yields a whole
regularization path in one model; ``train_separate`` fits a single lambda with
the modulation fixed to the identity. All gradients are derived by hand.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.linear_model import LogisticRegression
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .data import Dataset, Standardizer
from .metrics import (
    FairnessMetric,
    SurrogateKind,
    UndefinedStratumError,
    accuracy,
    stratum_masks,
    surrogate_loss,
    surrogate_loss_and_gradient,
    violation,
)

MODEL_FORMAT = "fairband-model"
MODEL_VERSION = 1
HIDDEN = 4


def _relu(v):
    return np.maximum(v, 0.0)


@dataclass
class FilmNet:
    """Scalar-in, scalar-out MLP with two ReLU hidden layers of width 4."""

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    W3: np.ndarray
    b3: np.ndarray

    PARAMS = ("W1", "b1", "W2", "b2", "W3", "b3")

    @classmethod
    def init(cls, rng: np.random.Generator, out_bias: float) -> "FilmNet":
        return cls(
            W1=rng.uniform(-1.0, 1.0, HIDDEN),
            b1=np.full(HIDDEN, 0.1),
            W2=rng.uniform(-1.0, 1.0, (HIDDEN, HIDDEN)) / math.sqrt(HIDDEN),
            b2=np.full(HIDDEN, 0.1),
            W3=rng.uniform(-0.1, 0.1, HIDDEN),
            b3=np.array([out_bias]),
        )

    @classmethod
    def constant(cls, value: float) -> "FilmNet":
        z = np.zeros(HIDDEN)
        return cls(z.copy(), z.copy(), np.zeros((HIDDEN, HIDDEN)), z.copy(), z.copy(), np.array([value]))

    def forward(self, t):
        """Evaluate at inputs ``t`` of shape (k,); returns (out (k,), cache)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        pre1 = np.outer(t, self.W1) + self.b1
        h1 = _relu(pre1)
        pre2 = h1 @ self.W2.T + self.b2
        h2 = _relu(pre2)
        out = h2 @ self.W3 + self.b3[0]
        return out, (t, pre1, h1, pre2, h2)

    def backward(self, cache, gout) -> dict:
        """Parameter gradients given d(loss)/d(out) of shape (k,)."""
        t, pre1, h1, pre2, h2 = cache
        gout = np.atleast_1d(np.asarray(gout, dtype=float))
        dh2 = np.outer(gout, self.W3) * (pre2 > 0)
        dh1 = (dh2 @ self.W2) * (pre1 > 0)
        return {
            "W3": gout @ h2,
            "b3": np.array([gout.sum()]),
            "W2": dh2.T @ h1,
            "b2": dh2.sum(axis=0),
            "W1": dh1.T @ t,
            "b1": dh1.sum(axis=0),
        }

    def copy(self) -> "FilmNet":
        return FilmNet(*(getattr(self, p).copy() for p in self.PARAMS))


@dataclass
class LinearFilmModel:
    w: np.ndarray
    b: float
    film_mu: FilmNet
    film_sigma: FilmNet
    lambda_low: float = 1e-6
    lambda_high: float = 10.0
    conditioned: bool = True
    fixed_lambda: float | None = None

    @classmethod
    def init(cls, feature_dim: int, seed: int = 0, lambda_low: float = 1e-6,
             lambda_high: float = 10.0) -> "LinearFilmModel":
        rng = np.random.default_rng(seed)
        return cls(
            w=rng.normal(0.0, 0.01, feature_dim),
            b=0.0,
            film_mu=FilmNet.init(rng, 0.0),
            film_sigma=FilmNet.init(rng, 1.0),
            lambda_low=lambda_low,
            lambda_high=lambda_high,
        )

    @classmethod
    def plain(cls, w, b, lambda_value: float | None = None) -> "LinearFilmModel":
        """Unconditioned logistic regression (identity modulation)."""
        return cls(np.asarray(w, dtype=float).ravel(), float(b), FilmNet.constant(0.0),
                   FilmNet.constant(1.0), conditioned=False, fixed_lambda=lambda_value)

    @property
    def feature_dim(self) -> int:
        return len(self.w)

    def lambda_input(self, lam):
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        if np.any(lam <= 0):
            raise ValueError("lambda must be positive for a conditioned model")
        lo, hi = math.log10(self.lambda_low), math.log10(self.lambda_high)
        return (np.log10(lam) - lo) / (hi - lo)

    def modulation(self, lam):
        """(scale, shift) arrays of shape (k,) for the given lambdas."""
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        if not self.conditioned:
            return np.ones(len(lam)), np.zeros(len(lam))
        t = self.lambda_input(lam)
        if np.any((t < -1e-12) | (t > 1 + 1e-12)):
            warnings.warn("lambda outside the training range; modulation is extrapolated", stacklevel=3)
        return self.film_sigma.forward(t)[0], self.film_mu.forward(t)[0]

    def base_logit(self, X):
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.feature_dim:
            raise ValueError(f"expected {self.feature_dim} features, got {X.shape[-1]}")
        return X @ self.w + self.b

    def forward(self, X, lam):
        """Logits. ``X`` (d,) or (n, d); scalar ``lam`` gives (n,), array ``lam`` (k,) gives (n, k)."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        z = self.base_logit(np.atleast_2d(X))
        scale, shift = self.modulation(lam)
        out = z[:, None] * scale + shift
        if np.ndim(lam) == 0:
            out = out[:, 0]
        return out[0] if single else out

    def predict(self, X, lam, threshold: float = 0.0):
        return (self.forward(X, lam) > threshold).astype(np.int64)

    # -- flat parameter access (used by optimisers and finite-difference checks)

    def param_names(self) -> list[str]:
        names = ["w", "b"]
        if self.conditioned:
            names += [f"mu.{p}" for p in FilmNet.PARAMS] + [f"sigma.{p}" for p in FilmNet.PARAMS]
        return names

    def get_param(self, name):
        if name == "w":
            return self.w
        if name == "b":
            return np.array([self.b])
        net, p = name.split(".")
        return getattr(self.film_mu if net == "mu" else self.film_sigma, p)

    def set_param(self, name, value):
        if name == "w":
            self.w = np.asarray(value, dtype=float).reshape(self.w.shape)
        elif name == "b":
            self.b = float(np.ravel(value)[0])
        else:
            net, p = name.split(".")
            target = self.film_mu if net == "mu" else self.film_sigma
            setattr(target, p, np.asarray(value, dtype=float).reshape(getattr(target, p).shape))

    def get_flat(self) -> np.ndarray:
        return np.concatenate([np.ravel(self.get_param(n)) for n in self.param_names()])

    def set_flat(self, flat):
        flat = np.asarray(flat, dtype=float)
        i = 0
        for n in self.param_names():
            size = np.size(self.get_param(n))
            self.set_param(n, flat[i:i + size])
            i += size

    def copy(self) -> "LinearFilmModel":
        return LinearFilmModel(self.w.copy(), self.b, self.film_mu.copy(), self.film_sigma.copy(),
                               self.lambda_low, self.lambda_high, self.conditioned, self.fixed_lambda)

    # -- objective

    def loss_and_grad(self, X, a, y, lam: float, metric=FairnessMetric.DP,
                      surrogate=SurrogateKind.SIGMOID_ABS, fairness: bool = True):
        """Mean cross-entropy + lam * surrogate and its gradient as a flat vector.

        With ``fairness=False`` (or lam == 0) only the cross-entropy is used.
        """
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n = len(y)
        z = self.base_logit(X)
        if self.conditioned:
            t = self.lambda_input(lam)
            sf, c_sig = self.film_sigma.forward(t)
            mf, c_mu = self.film_mu.forward(t)
            sf, mf = sf[0], mf[0]
        else:
            sf, mf = 1.0, 0.0
        logit = sf * z + mf
        loss = float(np.mean(np.logaddexp(0.0, logit) - y * logit))
        g = (expit(logit) - y) / n
        if fairness and lam != 0:
            fl, fg = surrogate_loss_and_gradient(surrogate, metric, logit, a, y)
            loss += lam * fl
            g = g + lam * fg
        dz = g * sf
        grads = {"w": X.T @ dz, "b": np.array([dz.sum()])}
        if self.conditioned:
            for k, v in self.film_sigma.backward(c_sig, np.array([g @ z])).items():
                grads[f"sigma.{k}"] = v
            for k, v in self.film_mu.backward(c_mu, np.array([g.sum()])).items():
                grads[f"mu.{k}"] = v
        flat = np.concatenate([np.ravel(grads[nm]) for nm in self.param_names()])
        return loss, flat

    def objective(self, X, a, y, lam, metric=FairnessMetric.DP, surrogate=SurrogateKind.SIGMOID_ABS):
        logit = self.forward(X, lam) if self.conditioned else self.base_logit(X)
        y = np.asarray(y, dtype=float)
        loss = float(np.mean(np.logaddexp(0.0, logit) - y * logit))
        if lam != 0:
            loss += lam * surrogate_loss(surrogate, metric, logit, a, y)
        return loss


@dataclass
class TrainConfig:
    lambda_low: float = 1e-6
    lambda_high: float = 10.0
    learning_rate: float = 0.01
    max_epochs: int = 1000
    batch_size: int = 256
    patience: int = 50
    seed: int = 0
    surrogate: SurrogateKind = SurrogateKind.SIGMOID_ABS
    metric: FairnessMetric = FairnessMetric.DP
    n_val_lambdas: int = 5
    optimizer: str = "adam"

    def __post_init__(self):
        self.surrogate = SurrogateKind(self.surrogate)
        self.metric = FairnessMetric(self.metric)
        if not 0 < self.lambda_low < self.lambda_high:
            raise ValueError("need 0 < lambda_low < lambda_high")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.optimizer not in ("sgd", "adam"):
            raise ValueError("optimizer must be 'sgd' or 'adam'")
        for name in ("max_epochs", "batch_size", "patience", "n_val_lambdas"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")

    def validation_lambdas(self) -> np.ndarray:
        return np.logspace(math.log10(self.lambda_low), math.log10(self.lambda_high), self.n_val_lambdas)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["surrogate"] = self.surrogate.value
        d["metric"] = self.metric.value
        return d


@dataclass
class TrainResult:
    model: LinearFilmModel
    history: list[dict] = field(default_factory=list)
    best_epoch: int = 0


class _Optimizer:
    """Fixed-step gradient descent or Adam (default moment decays)."""

    def __init__(self, config: TrainConfig, size: int):
        self.lr = config.learning_rate
        self.adam = config.optimizer == "adam"
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def __call__(self, grad):
        if not self.adam:
            return self.lr * grad
        self.t += 1
        self.m = 0.9 * self.m + 0.1 * grad
        self.v = 0.999 * self.v + 0.001 * grad * grad
        m_hat = self.m / (1 - 0.9**self.t)
        v_hat = self.v / (1 - 0.999**self.t)
        return self.lr * m_hat / (np.sqrt(v_hat) + 1e-8)


def _validation_loss(model, val: Dataset, lambdas, config: TrainConfig) -> float:
    return float(np.mean([model.objective(val.X, val.a, val.y, lam, config.metric, config.surrogate)
                          for lam in lambdas]))


def _fit(model: LinearFilmModel, train: Dataset, val: Dataset, config: TrainConfig,
         lambda_sampler, val_lambdas) -> TrainResult:
    train.require_attribute("training")
    val.require_attribute("validation")
    if train.feature_dim != model.feature_dim or val.feature_dim != model.feature_dim:
        raise ValueError("feature dimension mismatch between model and data")
    rng = np.random.default_rng([config.seed, 1])
    n = len(train)
    bs = min(config.batch_size, n)
    flat = model.get_flat()
    best = flat.copy()
    best_val = _validation_loss(model, val, val_lambdas, config)
    best_epoch, since_best = 0, 0
    history = []
    step = _Optimizer(config, flat.size)
    for epoch in range(1, config.max_epochs + 1):
        perm = rng.permutation(n)
        total, steps = 0.0, 0
        for start in range(0, n, bs):
            idx = perm[start:start + bs]
            lam = lambda_sampler(rng)
            Xb, ab, yb = train.X[idx], train.a[idx], train.y[idx]
            try:
                stratum_masks(config.metric, ab, yb)
                fair = True
            except UndefinedStratumError:
                fair = False
            loss, grad = model.loss_and_grad(Xb, ab, yb, lam, config.metric, config.surrogate, fair)
            if not np.all(np.isfinite(grad)):
                raise FloatingPointError(f"non-finite gradient at epoch {epoch}")
            flat -= step(grad)
            model.set_flat(flat)
            total += loss
            steps += 1
        val_loss = _validation_loss(model, val, val_lambdas, config)
        history.append({"epoch": epoch, "train_loss": total / steps, "val_loss": val_loss})
        if val_loss < best_val - 1e-12:
            best_val, best, best_epoch, since_best = val_loss, flat.copy(), epoch, 0
        elif best_epoch > 0:
            # patience only runs once training has beaten the initialization
            since_best += 1
            if since_best >= config.patience:
                break
    model.set_flat(best)
    return TrainResult(model, history, best_epoch)


def train_yoto_with_history(train: Dataset, val: Dataset, config: TrainConfig) -> TrainResult:
    model = LinearFilmModel.init(train.feature_dim, config.seed, config.lambda_low, config.lambda_high)
    lo, hi = math.log(config.lambda_low), math.log(config.lambda_high)
    return _fit(model, train, val, config, lambda rng: math.exp(rng.uniform(lo, hi)),
                config.validation_lambdas())


def train_yoto(train: Dataset, val: Dataset, config: TrainConfig) -> LinearFilmModel:
    """Loss-conditional training: a fresh log-uniform lambda for every mini-batch.

    Early stopping tracks the validation objective averaged over
    ``config.validation_lambdas()`` and restores the best epoch's parameters.
    """
    return train_yoto_with_history(train, val, config).model


def train_separate_with_history(train: Dataset, val: Dataset, lam: float,
                                config: TrainConfig) -> TrainResult:
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    rng = np.random.default_rng(config.seed)
    model = LinearFilmModel.plain(rng.normal(0.0, 0.01, train.feature_dim), 0.0, float(lam))
    return _fit(model, train, val, config, lambda _rng: float(lam), [float(lam)])


def train_separate(train: Dataset, val: Dataset, lam: float, config: TrainConfig) -> LinearFilmModel:
    """Fixed-lambda regularized logistic regression (identity modulation)."""
    return train_separate_with_history(train, val, lam, config).model


@dataclass(frozen=True)
class TradeoffPoint:
    accuracy: float
    violation: float
    lam: float | None = None

    def __post_init__(self):
        for v in (self.accuracy, self.violation):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"trade-off coordinates must lie in [0, 1], got {v}")


def predictions_grid(model: LinearFilmModel, lambda_grid, X, threshold: float = 0.0) -> np.ndarray:
    """Hard predictions of shape (n, k), one column per lambda."""
    lambda_grid = np.atleast_1d(np.asarray(lambda_grid, dtype=float))
    if lambda_grid.size == 0:
        raise ValueError("lambda grid must be nonempty")
    if not model.conditioned:
        col = (model.base_logit(X) > threshold).astype(np.int64)
        return np.repeat(col[:, None], len(lambda_grid), axis=1)
    return (model.forward(X, lambda_grid) > threshold).astype(np.int64)


def sweep(model: LinearFilmModel, lambda_grid, data: Dataset, metric=FairnessMetric.DP,
          threshold: float = 0.0) -> list[TradeoffPoint]:
    data.require_attribute("sweep")
    lambda_grid = np.atleast_1d(np.asarray(lambda_grid, dtype=float))
    P = predictions_grid(model, lambda_grid, data.X, threshold)
    accs = (P == data.y[:, None]).mean(axis=0)
    viols = np.atleast_1d(violation(metric, P, data.a, data.y))
    return [TradeoffPoint(float(ac), float(v), float(l)) for ac, v, l in zip(accs, viols, lambda_grid)]


def evaluate_point(model: LinearFilmModel, data: Dataset, metric=FairnessMetric.DP,
                   threshold: float = 0.0) -> TradeoffPoint:
    """Trade-off point of an unconditioned (separately trained) model."""
    pred = (model.base_logit(data.X) > threshold).astype(np.int64)
    return TradeoffPoint(accuracy(pred, data.y), violation(metric, pred, data.a, data.y),
                         model.fixed_lambda)


# -- persistence


def _array_doc(arr) -> dict:
    arr = np.asarray(arr, dtype=float)
    return {"shape": list(arr.shape), "data": [float(v) for v in arr.ravel()]}


def _array_from_doc(doc) -> np.ndarray:
    return np.array(doc["data"], dtype=float).reshape(doc["shape"])


def model_to_dict(model: LinearFilmModel, config: TrainConfig | None = None,
                  standardizer: Standardizer | None = None, extra: dict | None = None) -> dict:
    params = {n: _array_doc(model.get_param(n)) for n in model.param_names()}
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "kind": "yoto" if model.conditioned else "separate",
        "feature_dim": model.feature_dim,
        "lambda_low": model.lambda_low,
        "lambda_high": model.lambda_high,
        "fixed_lambda": model.fixed_lambda,
        "params": params,
    }
    if config is not None:
        doc["train_config"] = config.to_dict()
        doc["validation_lambdas"] = [float(v) for v in config.validation_lambdas()]
    if standardizer is not None and standardizer.mean_ is not None:
        doc["standardizer"] = {"mean": _array_doc(standardizer.mean_), "scale": _array_doc(standardizer.scale_)}
    if extra:
        doc.update(extra)
    return doc


def model_from_dict(doc: dict) -> LinearFilmModel:
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError("not a fairband model document")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')}")
    params = doc["params"]
    w = _array_from_doc(params["w"])
    b = float(_array_from_doc(params["b"])[0])
    if doc["kind"] == "separate":
        return LinearFilmModel.plain(w, b, doc.get("fixed_lambda"))
    nets = {}
    for net in ("mu", "sigma"):
        nets[net] = FilmNet(*(_array_from_doc(params[f"{net}.{p}"]) for p in FilmNet.PARAMS))
    return LinearFilmModel(w, b, nets["mu"], nets["sigma"], float(doc["lambda_low"]),
                           float(doc["lambda_high"]), True, None)


def save_model(path, model: LinearFilmModel, **kwargs):
    """Write the model as JSON.

    Floats are written with Python's shortest round-trip ``repr`` and parsed
    back with correctly rounded decimal-to-binary conversion, so a save/load
    cycle reproduces every parameter bit for bit.
    """
    Path(path).write_text(json.dumps(model_to_dict(model, **kwargs), indent=1) + "\n")


def load_model(path) -> tuple[LinearFilmModel, dict]:
    doc = json.loads(Path(path).read_text())
    return model_from_dict(doc), doc


# -- scikit-learn style estimators


class _FairEstimatorBase(ClassifierMixin, BaseEstimator):
    def _config(self) -> TrainConfig:
        return TrainConfig(
            lambda_low=self.lambda_low, lambda_high=self.lambda_high,
            learning_rate=self.learning_rate, max_epochs=self.max_epochs,
            batch_size=self.batch_size, patience=self.patience, seed=self.random_state,
            surrogate=self.surrogate, metric=self.metric, optimizer=self.optimizer,
        )

    def _datasets(self, X, y, sensitive_features, eval_set):
        X, y = check_X_y(X, y)
        a = check_array(np.asarray(sensitive_features).reshape(-1, 1), ensure_all_finite=True).ravel()
        if len(a) != len(y):
            raise ValueError("sensitive_features must have one entry per row")
        self.classes_ = np.array([0, 1])
        data = Dataset(X, a.astype(np.int64), y.astype(np.int64))
        if eval_set is not None:
            Xv, yv, av = eval_set
            return data, Dataset(check_array(Xv), np.asarray(av, dtype=np.int64), np.asarray(yv, dtype=np.int64))
        perm = np.random.default_rng(self.random_state).permutation(len(y))
        n_val = max(1, int(round(self.validation_fraction * len(y))))
        return data.subset(perm[n_val:]), data.subset(perm[:n_val])

    def _check_X(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return X


class YOTOClassifier(_FairEstimatorBase):
    """One model for the whole fairness regularization path.

    ``fit`` needs ``sensitive_features``; prediction methods take the
    regularization weight ``lam`` so a single fitted estimator answers for any
    point on the path. ``eval_set=(X_val, y_val, a_val)`` replaces the internal
    validation split.
    """

    def __init__(self, metric="dp", surrogate="sigmoid_abs", lambda_low=1e-6, lambda_high=10.0,
                 learning_rate=0.01, max_epochs=1000, batch_size=256, patience=50,
                 optimizer="adam", validation_fraction=0.2, random_state=0):
        self.metric = metric
        self.surrogate = surrogate
        self.lambda_low = lambda_low
        self.lambda_high = lambda_high
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.batch_size = batch_size
        self.patience = patience
        self.optimizer = optimizer
        self.validation_fraction = validation_fraction
        self.random_state = random_state

    def fit(self, X, y, sensitive_features, eval_set=None):
        train, val = self._datasets(X, y, sensitive_features, eval_set)
        result = train_yoto_with_history(train, val, self._config())
        self.model_ = result.model
        self.history_ = result.history
        self.n_features_in_ = train.feature_dim
        return self

    def decision_function(self, X, lam):
        return self.model_.forward(self._check_X(X), lam)

    def predict_proba(self, X, lam):
        p = expit(self.decision_function(X, lam))
        return np.stack([1 - p, p], axis=-1)

    def predict(self, X, lam):
        return (self.decision_function(X, lam) > 0).astype(np.int64)

    def score(self, X, y, lam=1e-6, sample_weight=None):
        return float(np.average(self.predict(X, lam) == np.asarray(y), weights=sample_weight))

    def tradeoff(self, X, y, sensitive_features, lambdas) -> list[TradeoffPoint]:
        data = Dataset(self._check_X(X), np.asarray(sensitive_features), np.asarray(y))
        return sweep(self.model_, lambdas, data, self.metric)


class FairLogisticRegression(_FairEstimatorBase):
    """Logistic regression with a fixed fairness penalty weight ``lam``."""

    def __init__(self, lam=0.0, metric="dp", surrogate="sigmoid_abs", learning_rate=0.01,
                 max_epochs=1000, batch_size=256, patience=50, optimizer="adam",
                 validation_fraction=0.2, random_state=0):
        self.lam = lam
        self.metric = metric
        self.surrogate = surrogate
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.batch_size = batch_size
        self.patience = patience
        self.optimizer = optimizer
        self.validation_fraction = validation_fraction
        self.random_state = random_state
        self.lambda_low, self.lambda_high = 1e-6, 10.0

    def fit(self, X, y, sensitive_features, eval_set=None):
        train, val = self._datasets(X, y, sensitive_features, eval_set)
        result = train_separate_with_history(train, val, self.lam, self._config())
        self.model_ = result.model
        self.history_ = result.history
        self.n_features_in_ = train.feature_dim
        self.coef_ = self.model_.w[None, :].copy()
        self.intercept_ = np.array([self.model_.b])
        return self

    def decision_function(self, X):
        return self.model_.base_logit(self._check_X(X))

    def predict_proba(self, X):
        p = expit(self.decision_function(X))
        return np.stack([1 - p, p], axis=-1)

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(np.int64)


def train_attribute_predictor(X, a, seed: int = 0):
    """Plain logistic regression predicting the sensitive attribute from features.

    Returns a callable mapping features to 0/1 predicted attributes.
    """
    clf = LogisticRegression(random_state=seed).fit(np.asarray(X, dtype=float), np.asarray(a, dtype=np.int64))
    return lambda Z: clf.predict(np.asarray(Z, dtype=float)).astype(np.int64)
