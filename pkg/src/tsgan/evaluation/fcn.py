"""Fully convolutional time-series classifier.

Three conv blocks (128/256/128 filters, kernels 8/5/3) with batch norm and
ReLU, global average pooling, and a dense softmax head.  The pooled
128-dimensional activation doubles as the feature embedding for the
Fréchet distance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..autodiff import Tensor, backward, no_grad, ops
from ..gan.config import derived_seed
from ..nn import AdamState, Network, adam_step, build_network, init_parameters, network_forward
from ..nn import layers as L

FEATURE_DIM = 128
FCN_ADAM = dict(lr=1e-3, beta1=0.9, beta2=0.999)
DEFAULT_EPOCHS = 200  # 1000 reproduces the original training budget
BATCH_SIZE = 16


class EvaluationError(ValueError):
    pass


@dataclass
class FcnClassifier:
    trunk: Network  # conv blocks + global average pooling -> features
    head: Network  # features -> class logits
    n_classes: int
    signal_length: int
    trained: bool = False

    @property
    def feature_dim(self) -> int:
        return FEATURE_DIM


def build_fcn(signal_length: int, n_classes: int) -> FcnClassifier:
    trunk = build_network(
        (1, signal_length),
        [
            L.conv1d(128, 8, 1, 4),
            L.batch_norm(),
            L.leaky_relu(0.0),
            L.conv1d(256, 5, 1, 2),
            L.batch_norm(),
            L.leaky_relu(0.0),
            L.conv1d(FEATURE_DIM, 3, 1, 1),
            L.batch_norm(),
            L.leaky_relu(0.0),
            L.global_avg_pool(),
        ],
    )
    head = build_network((FEATURE_DIM,), [L.dense(n_classes)])
    return FcnClassifier(trunk=trunk, head=head, n_classes=n_classes, signal_length=signal_length)


def _cross_entropy(logits: Tensor, onehot: np.ndarray) -> Tensor:
    shift = Tensor(logits.data.max(axis=1, keepdims=True))
    z = ops.sub(logits, shift)
    log_norm = ops.log(ops.sum(ops.exp(z), axis=1))
    z_true = ops.sum(ops.mul(z, Tensor(onehot)), axis=1)
    return ops.mean(ops.sub(log_norm, z_true))


def train_fcn(
    labels: np.ndarray,
    values: np.ndarray,
    epochs: int = DEFAULT_EPOCHS,
    seed: int = 0,
) -> FcnClassifier:
    """Train the classifier; deterministic per seed.

    Rejects single-class and non-contiguous label sets.
    """
    labels = np.asarray(labels, dtype=np.int64)
    values = np.asarray(values, dtype=np.float32)
    classes = np.unique(labels)
    n_classes = len(classes)
    if n_classes < 2:
        raise EvaluationError(f"need at least 2 classes to train, got {n_classes}")
    if classes[0] != 0 or classes[-1] != n_classes - 1:
        raise EvaluationError(f"labels must be contiguous 0..{n_classes - 1}, got {classes.tolist()}")
    n, length = values.shape
    clf = build_fcn(length, n_classes)
    init_parameters(clf.trunk, derived_seed(seed, "fcn", "trunk"))
    init_parameters(clf.head, derived_seed(seed, "fcn", "head"))
    opt_trunk = AdamState(**FCN_ADAM)
    opt_head = AdamState(**FCN_ADAM)
    rng = np.random.default_rng(derived_seed(seed, "fcn", "shuffle"))
    eye = np.eye(n_classes, dtype=np.float32)
    params = dict(clf.trunk.params)
    head_params = dict(clf.head.params)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, BATCH_SIZE):
            idx = order[start : start + BATCH_SIZE]
            if len(idx) < 2:
                continue  # batch norm needs more than one sample
            x = Tensor(values[idx].reshape(len(idx), 1, length))
            feats = network_forward(clf.trunk, x, training=True)
            logits = network_forward(clf.head, feats, training=True)
            loss = _cross_entropy(logits, eye[labels[idx]])
            if not np.isfinite(loss.item()):
                raise EvaluationError(f"classifier loss diverged: {loss.item()}")
            grads = backward(loss, list(params.values()) + list(head_params.values()))
            adam_step(opt_trunk, params, grads)
            adam_step(opt_head, head_params, grads)
    clf.trained = True
    return clf


def extract_features(clf: FcnClassifier, values: np.ndarray) -> np.ndarray:
    """Penultimate (pooled) activations, (n, 128); pure inference."""
    if not clf.trained:
        raise EvaluationError("classifier has not been trained")
    return _forward_batched(clf, values, want="features")


def predict_proba(clf: FcnClassifier, values: np.ndarray) -> np.ndarray:
    """Softmax class probabilities, (n, n_classes)."""
    if not clf.trained:
        raise EvaluationError("classifier has not been trained")
    return _forward_batched(clf, values, want="proba")


def predict(clf: FcnClassifier, values: np.ndarray) -> np.ndarray:
    return predict_proba(clf, values).argmax(axis=1)


def _forward_batched(clf: FcnClassifier, values: np.ndarray, want: str) -> np.ndarray:
    values = np.asarray(values, dtype=np.float32)
    if values.ndim != 2 or values.shape[1] != clf.signal_length:
        raise EvaluationError(
            f"expected (n, {clf.signal_length}) series, got {values.shape}"
        )
    chunks = []
    with no_grad():
        for start in range(0, len(values), 64):
            block = values[start : start + 64]
            x = Tensor(block.reshape(len(block), 1, clf.signal_length))
            feats = network_forward(clf.trunk, x, training=False)
            if want == "features":
                chunks.append(feats.data.copy())
                continue
            logits = network_forward(clf.head, feats, training=False).data
            shifted = logits - logits.max(axis=1, keepdims=True)
            expd = np.exp(shifted)
            chunks.append(expd / expd.sum(axis=1, keepdims=True))
    return np.concatenate(chunks, axis=0) if chunks else np.zeros((0, FEATURE_DIM))
