"""Fréchet distance between Gaussian fits of feature embeddings."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fcn import FcnClassifier, EvaluationError, extract_features

COV_EPS = 1e-6
SYMMETRY_TOL = 1e-4
LOW_SAMPLE_FACTOR = 1  # sides below feature_dim + 1 samples get flagged


@dataclass
class FidReport:
    dataset: str
    model: str
    fid: float
    n_real: int
    n_synthetic: int
    real_mean_norm: float
    real_cov_trace: float
    synthetic_mean_norm: float
    synthetic_cov_trace: float
    low_sample: bool = False


def frechet_distance(
    mu1: np.ndarray, sigma1: np.ndarray, mu2: np.ndarray, sigma2: np.ndarray
) -> float:
    """||mu1-mu2||^2 + Tr(S1 + S2 - 2 (S1 S2)^(1/2)).

    The matrix square root is taken via a symmetric eigendecomposition of
    S1^(1/2) S2 S1^(1/2) after adding eps*I to both covariances; tiny
    negative round-off results clamp to zero.
    """
    mu1 = np.asarray(mu1, dtype=np.float64).reshape(-1)
    mu2 = np.asarray(mu2, dtype=np.float64).reshape(-1)
    sigma1 = np.atleast_2d(np.asarray(sigma1, dtype=np.float64))
    sigma2 = np.atleast_2d(np.asarray(sigma2, dtype=np.float64))
    d = mu1.size
    if mu2.size != d or sigma1.shape != (d, d) or sigma2.shape != (d, d):
        raise EvaluationError(
            f"moment shapes disagree: {mu1.shape} {sigma1.shape} vs {mu2.shape} {sigma2.shape}"
        )
    for name, s in (("first", sigma1), ("second", sigma2)):
        asym = np.abs(s - s.T).max()
        if asym > SYMMETRY_TOL:
            raise EvaluationError(f"{name} covariance is not symmetric (max deviation {asym:.2e})")
    s1 = (sigma1 + sigma1.T) / 2 + COV_EPS * np.eye(d)
    s2 = (sigma2 + sigma2.T) / 2 + COV_EPS * np.eye(d)
    evals, evecs = np.linalg.eigh(s1)
    root1 = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.T
    inner = root1 @ s2 @ root1
    inner_evals = np.linalg.eigh((inner + inner.T) / 2)[0]
    trace_sqrt = np.sqrt(np.clip(inner_evals, 0.0, None)).sum()
    dist = float(((mu1 - mu2) ** 2).sum() + np.trace(s1) + np.trace(s2) - 2.0 * trace_sqrt)
    return max(dist, 0.0)


def feature_moments(features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and unbiased covariance of a feature matrix."""
    feats = np.asarray(features, dtype=np.float64)
    if feats.ndim != 2 or feats.shape[0] < 2:
        raise EvaluationError(f"need a (n>=2, d) feature matrix, got {feats.shape}")
    mu = feats.mean(axis=0)
    cov = np.cov(feats, rowvar=False, ddof=1)
    return mu, np.atleast_2d(cov)


def fid_1d(
    clf: FcnClassifier,
    real_values: np.ndarray,
    synthetic_values: np.ndarray,
    dataset: str = "",
    model: str = "",
) -> FidReport:
    """Fréchet distance over classifier features of real vs. synthetic series."""
    real_values = np.asarray(real_values, dtype=np.float32)
    synthetic_values = np.asarray(synthetic_values, dtype=np.float32)
    if len(real_values) == 0 or len(synthetic_values) == 0:
        raise EvaluationError("both sides of the distance need at least one series")
    real_feats = extract_features(clf, real_values).astype(np.float64)
    synth_feats = extract_features(clf, synthetic_values).astype(np.float64)
    mu_r, cov_r = feature_moments(real_feats)
    mu_s, cov_s = feature_moments(synth_feats)
    value = frechet_distance(mu_r, cov_r, mu_s, cov_s)
    low = min(len(real_values), len(synthetic_values)) < clf.feature_dim + LOW_SAMPLE_FACTOR
    return FidReport(
        dataset=dataset,
        model=model,
        fid=value,
        n_real=len(real_values),
        n_synthetic=len(synthetic_values),
        real_mean_norm=float(np.linalg.norm(mu_r)),
        real_cov_trace=float(np.trace(cov_r)),
        synthetic_mean_norm=float(np.linalg.norm(mu_s)),
        synthetic_cov_trace=float(np.trace(cov_s)),
        low_sample=low,
    )
