"""Evaluation stack: FCN classifier, Fréchet distance, accuracy protocols."""
from .fcn import (
    DEFAULT_EPOCHS,
    EvaluationError,
    FcnClassifier,
    build_fcn,
    extract_features,
    predict,
    predict_proba,
    train_fcn,
)
from .frechet import FidReport, feature_moments, fid_1d, frechet_distance
from .protocols import ClassificationReport, trtr, trts, tstr
from . import reports

__all__ = [
    "EvaluationError",
    "FcnClassifier",
    "build_fcn",
    "train_fcn",
    "extract_features",
    "predict",
    "predict_proba",
    "DEFAULT_EPOCHS",
    "FidReport",
    "fid_1d",
    "frechet_distance",
    "feature_moments",
    "ClassificationReport",
    "tstr",
    "trts",
    "trtr",
    "reports",
]
