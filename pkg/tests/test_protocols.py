"""TSTR/TRTS/TRTR protocol fidelity on small separable datasets."""
import numpy as np
import pytest

from tsgan.datasets import SignalDataset
from tsgan.evaluation import EvaluationError, trtr, trts, tstr


def offset_signal_dataset(n_train=10, n_test=8, length=32, seed=0) -> SignalDataset:
    rng = np.random.default_rng(seed)

    def block(n):
        lo = rng.normal(-1, 0.3, size=(n, length))
        hi = rng.normal(1, 0.3, size=(n, length))
        labels = np.array([0] * n + [1] * n, dtype=np.int64)
        return labels, np.concatenate([lo, hi]).astype(np.float32)

    tr_l, tr_v = block(n_train)
    te_l, te_v = block(n_test)
    return SignalDataset(
        name="offset",
        labels=np.concatenate([tr_l, te_l]),
        values=np.concatenate([tr_v, te_v]),
        n_train=2 * n_train,
    )


def pool_from(labels, values):
    return {c: values[labels == c] for c in np.unique(labels)}


EPOCHS = 15


def test_trtr_high_accuracy_and_bookkeeping():
    ds = offset_signal_dataset()
    rep = trtr(ds, epochs=EPOCHS, seed=0)
    assert rep.accuracy >= 95.0
    assert rep.confusion.sum() == len(ds) - ds.n_train
    # confusion rows sum to per-class test counts, diagonal matches accuracy
    test_labels, _ = ds.test_split()
    for c in range(ds.class_count):
        assert rep.confusion[c].sum() == (test_labels == c).sum()
    assert abs(rep.accuracy - 100.0 * np.trace(rep.confusion) / rep.confusion.sum()) < 1e-9


def test_trtr_deterministic():
    ds = offset_signal_dataset()
    a = trtr(ds, epochs=5, seed=3)
    b = trtr(ds, epochs=5, seed=3)
    assert a.accuracy == b.accuracy
    np.testing.assert_array_equal(a.confusion, b.confusion)


def test_tstr_with_verbatim_copies_equals_trtr_exactly():
    ds = offset_signal_dataset()
    train_labels, train_values = ds.train_split()
    synth = pool_from(train_labels, train_values.copy())
    r_tstr = tstr(ds, synth, epochs=EPOCHS, seed=1)
    r_trtr = trtr(ds, epochs=EPOCHS, seed=1)
    assert r_tstr.accuracy == r_trtr.accuracy
    np.testing.assert_array_equal(r_tstr.confusion, r_trtr.confusion)


def test_split_sizes_mirror_original():
    ds = offset_signal_dataset(n_train=7, n_test=5)
    train_labels, train_values = ds.train_split()
    synth = pool_from(train_labels, train_values.copy())
    rep = tstr(ds, synth, epochs=3, seed=0)
    assert rep.train_sizes == {0: 7, 1: 7}
    assert rep.test_sizes == {0: 5, 1: 5}


def test_trts_with_test_copies_equals_trtr():
    ds = offset_signal_dataset()
    test_labels, test_values = ds.test_split()
    synth = pool_from(test_labels, test_values.copy())
    r_trts = trts(ds, synth, epochs=EPOCHS, seed=2)
    r_trtr = trtr(ds, epochs=EPOCHS, seed=2)
    assert r_trts.accuracy == r_trtr.accuracy


def test_trts_constant_zero_synthetic_at_most_majority_prior():
    ds = offset_signal_dataset()
    test_labels, _ = ds.test_split()
    synth = {
        c: np.zeros(((test_labels == c).sum(), ds.signal_length), dtype=np.float32)
        for c in range(ds.class_count)
    }
    rep = trts(ds, synth, epochs=EPOCHS, seed=0)
    prior = max((test_labels == c).mean() for c in range(ds.class_count))
    assert rep.accuracy <= 100.0 * prior + 1e-9


def test_missing_class_in_pool_rejected():
    ds = offset_signal_dataset()
    train_labels, train_values = ds.train_split()
    synth = {0: train_values[train_labels == 0]}
    with pytest.raises(EvaluationError, match="missing class 1"):
        tstr(ds, synth, epochs=1, seed=0)


def test_undersized_pool_rejected():
    ds = offset_signal_dataset()
    train_labels, train_values = ds.train_split()
    synth = pool_from(train_labels, train_values)
    synth[1] = synth[1][:2]
    with pytest.raises(EvaluationError, match="needs"):
        tstr(ds, synth, epochs=1, seed=0)
