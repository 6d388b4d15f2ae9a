"""Confidence bands on the accuracy-fairness trade-off, estimated from one lambda-conditioned model."""

from .ci_fairness import SignedInterval, fairness_ci
from .ci_mean import CiMethod, Interval, Method, Side, mean_ci
from .data import CsvSchema, DataError, Dataset, SyntheticConfig, generate_synthetic, load_csv, split
from .metrics import FairnessMetric, SurrogateKind, UndefinedStratumError, accuracy, violation
from .model import (FairLogisticRegression, LinearFilmModel, TradeoffPoint, TrainConfig, YOTOClassifier,
                    evaluate_point, load_model, save_model, sweep, train_separate, train_yoto)
from .oracle import GroundTruthCurve, analytic_tradeoff, ground_truth_curve
from .scarce import ImputationWarning, ScarcePartition, scarce_report
from .tradeoff import (BandOptions, Region, TradeoffBand, Verdict, audit_baseline, build_band, classify,
                       delta_trend, sensitivity_delta)

__version__ = "0.1.0"

__all__ = [
    "BandOptions", "CiMethod", "CsvSchema", "DataError", "Dataset", "FairLogisticRegression", "FairnessMetric",
    "GroundTruthCurve", "ImputationWarning", "Interval", "LinearFilmModel", "Method", "Region", "ScarcePartition",
    "Side", "SignedInterval", "SurrogateKind", "SyntheticConfig", "TradeoffBand", "TradeoffPoint", "TrainConfig",
    "UndefinedStratumError", "Verdict", "YOTOClassifier", "accuracy", "analytic_tradeoff", "audit_baseline",
    "build_band", "classify", "delta_trend", "evaluate_point", "fairness_ci", "generate_synthetic", "ground_truth_curve",
    "load_csv", "load_model", "mean_ci", "save_model", "scarce_report", "sensitivity_delta", "split", "sweep",
    "train_separate", "train_yoto", "violation",
]
