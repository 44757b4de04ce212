"""Fréchet distance closed forms and feature-distance properties."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsgan.evaluation import (
    EvaluationError,
    feature_moments,
    fid_1d,
    frechet_distance,
    train_fcn,
)
from tsgan.evaluation.frechet import COV_EPS


def test_identical_gaussians_zero():
    r = np.random.default_rng(0)
    mu = r.normal(size=5)
    a = r.normal(size=(5, 5))
    sigma = a @ a.T + np.eye(5)
    assert frechet_distance(mu, sigma, mu.copy(), sigma.copy()) <= 1e-6


def test_one_dimensional_closed_form():
    d = frechet_distance(np.array([0.0]), np.array([[1.0]]), np.array([2.0]), np.array([[1.0]]))
    assert abs(d - 4.0) < 1e-6


def test_diagonal_case_matches_scalar_formula():
    r = np.random.default_rng(1)
    dim = 6
    mu1, mu2 = r.normal(size=dim), r.normal(size=dim)
    v1 = r.uniform(0.5, 2.0, size=dim)
    v2 = r.uniform(0.5, 2.0, size=dim)
    got = frechet_distance(mu1, np.diag(v1), mu2, np.diag(v2))
    # scalar formula per dimension, on the same eps-regularized variances
    s1, s2 = v1 + COV_EPS, v2 + COV_EPS
    expect = ((mu1 - mu2) ** 2).sum() + (s1 + s2 - 2 * np.sqrt(s1 * s2)).sum()
    assert abs(got - expect) < 1e-6


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=20, deadline=None)
def test_symmetry_property(seed):
    r = np.random.default_rng(seed)
    dim = 4
    mu1, mu2 = r.normal(size=dim), r.normal(size=dim)
    a = r.normal(size=(dim, dim))
    b = r.normal(size=(dim, dim))
    s1 = a @ a.T + 0.5 * np.eye(dim)
    s2 = b @ b.T + 0.5 * np.eye(dim)
    d12 = frechet_distance(mu1, s1, mu2, s2)
    d21 = frechet_distance(mu2, s2, mu1, s1)
    assert d12 >= 0.0
    assert abs(d12 - d21) < 1e-6 * max(1.0, d12)


def test_asymmetric_covariance_rejected():
    bad = np.array([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(EvaluationError, match="symmetric"):
        frechet_distance(np.zeros(2), bad, np.zeros(2), np.eye(2))


def test_moments_unbiased_covariance():
    x = np.array([[1.0, 0.0], [3.0, 0.0]])
    mu, cov = feature_moments(x)
    np.testing.assert_allclose(mu, [2.0, 0.0])
    assert abs(cov[0, 0] - 2.0) < 1e-12  # (n-1) estimator


def _toy_classifier():
    rng = np.random.default_rng(3)
    values = np.concatenate(
        [rng.normal(-1, 0.3, size=(12, 32)), rng.normal(1, 0.3, size=(12, 32))]
    ).astype(np.float32)
    labels = np.array([0] * 12 + [1] * 12, dtype=np.int64)
    return train_fcn(labels, values, epochs=5, seed=0), values


def test_fid_identical_copy_is_zero():
    clf, values = _toy_classifier()
    rep = fid_1d(clf, values, values.copy(), dataset="toy", model="copy")
    assert rep.fid <= 1e-6
    assert rep.n_real == rep.n_synthetic == len(values)
    assert rep.low_sample  # 24 samples << feature dim


def test_fid_sample_order_invariant():
    clf, values = _toy_classifier()
    rng = np.random.default_rng(5)
    other = rng.normal(size=values.shape).astype(np.float32)
    a = fid_1d(clf, values, other).fid
    b = fid_1d(clf, values[rng.permutation(len(values))], other[rng.permutation(len(other))]).fid
    assert abs(a - b) < 1e-6 * max(1.0, a)


def test_fid_noise_farther_than_half_split():
    clf, values = _toy_classifier()
    half1, half2 = values[::2], values[1::2]
    noise = np.random.default_rng(6).normal(size=half2.shape).astype(np.float32)
    d_half = fid_1d(clf, half1, half2).fid
    d_noise = fid_1d(clf, half1, noise).fid
    assert d_noise > d_half


def test_fid_empty_side_rejected():
    clf, values = _toy_classifier()
    with pytest.raises(EvaluationError, match="at least one"):
        fid_1d(clf, values, values[:0])
