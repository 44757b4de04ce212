"""Classification-based evaluation: train/test role swaps between real and
synthetic data.

Split sizes always mirror the original dataset: a protocol that trains on
synthetic data uses exactly as many synthetic series per class as the real
train split had, and likewise for test sides.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..datasets import SignalDataset
from .fcn import DEFAULT_EPOCHS, EvaluationError, predict, train_fcn


@dataclass
class ClassificationReport:
    protocol: str  # TSTR | TRTS | TRTR
    accuracy: float  # percent
    confusion: np.ndarray  # (K, K), rows = true class
    train_sizes: dict[int, int]
    test_sizes: dict[int, int]

    def class_accuracy(self, label: int) -> float:
        row = self.confusion[label]
        return 100.0 * row[label] / row.sum() if row.sum() else 0.0


def _split_sizes(labels: np.ndarray, n_classes: int) -> dict[int, int]:
    return {c: int((labels == c).sum()) for c in range(n_classes)}


def _mirror_pool(
    pool: dict[int, np.ndarray], labels: np.ndarray, n_classes: int, length: int
) -> np.ndarray:
    """Arrange per-class synthetic series in the real split's label order."""
    cursors = {c: 0 for c in range(n_classes)}
    rows = np.zeros((len(labels), length), dtype=np.float32)
    for i, lab in enumerate(labels):
        lab = int(lab)
        if lab not in pool:
            raise EvaluationError(f"synthetic pool is missing class {lab}")
        cur = cursors[lab]
        if cur >= len(pool[lab]):
            raise EvaluationError(
                f"synthetic pool for class {lab} has {len(pool[lab])} series, "
                f"needs {int((labels == lab).sum())}"
            )
        rows[i] = pool[lab][cur]
        cursors[lab] += 1
    return rows


def _report(protocol, clf, test_values, test_labels, train_labels, n_classes) -> ClassificationReport:
    preds = predict(clf, test_values)
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    for true, got in zip(test_labels, preds):
        confusion[int(true), int(got)] += 1
    accuracy = 100.0 * np.trace(confusion) / confusion.sum()
    return ClassificationReport(
        protocol=protocol,
        accuracy=float(accuracy),
        confusion=confusion,
        train_sizes=_split_sizes(np.asarray(train_labels), n_classes),
        test_sizes=_split_sizes(np.asarray(test_labels), n_classes),
    )


def trtr(ds: SignalDataset, epochs: int = DEFAULT_EPOCHS, seed: int = 0) -> ClassificationReport:
    """Train on the real train split, test on the real test split."""
    train_labels, train_values = ds.train_split()
    test_labels, test_values = ds.test_split()
    clf = train_fcn(train_labels, train_values, epochs=epochs, seed=seed)
    return _report("TRTR", clf, test_values, test_labels, train_labels, ds.class_count)


def tstr(
    ds: SignalDataset,
    synthetic_per_class: dict[int, np.ndarray],
    epochs: int = DEFAULT_EPOCHS,
    seed: int = 0,
) -> ClassificationReport:
    """Train on synthetic series (split sizes mirroring the real train
    split), test on the real test split."""
    train_labels, _ = ds.train_split()
    test_labels, test_values = ds.test_split()
    synth_values = _mirror_pool(synthetic_per_class, train_labels, ds.class_count, ds.signal_length)
    clf = train_fcn(train_labels, synth_values, epochs=epochs, seed=seed)
    return _report("TSTR", clf, test_values, test_labels, train_labels, ds.class_count)


def trts(
    ds: SignalDataset,
    synthetic_per_class: dict[int, np.ndarray],
    epochs: int = DEFAULT_EPOCHS,
    seed: int = 0,
) -> ClassificationReport:
    """Train on the real train split, test on synthetic series (split sizes
    mirroring the real test split)."""
    train_labels, train_values = ds.train_split()
    test_labels, _ = ds.test_split()
    synth_values = _mirror_pool(synthetic_per_class, test_labels, ds.class_count, ds.signal_length)
    clf = train_fcn(train_labels, train_values, epochs=epochs, seed=seed)
    return _report("TRTS", clf, synth_values, test_labels, train_labels, ds.class_count)
