"""Dataset loading, normalization and length standardization."""
import gzip

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsgan.datasets import (
    DatasetError,
    load_dataset,
    make_sine_square_dataset,
    prepare_dataset,
    size_category,
    standardize_length,
    write_ucr_file,
    znormalize,
)


def _write(path, lines):
    path.write_text("\n".join(lines) + "\n")


def test_load_concatenates_train_and_test(tmp_path):
    _write(tmp_path / "d_TRAIN.tsv", ["1\t0.1\t0.2\t0.3", "2\t0.4\t0.5\t0.6"])
    _write(tmp_path / "d_TEST.tsv", ["1\t1\t2\t3", "2\t4\t5\t6", "1\t7\t8\t9"])
    ds = load_dataset(tmp_path / "d_TRAIN.tsv", tmp_path / "d_TEST.tsv")
    assert len(ds) == 5
    assert ds.n_train == 2
    assert ds.signal_length == 3


def test_labels_remapped_contiguous(tmp_path):
    _write(tmp_path / "a.tsv", ["5\t1\t2", "9\t3\t4"])
    _write(tmp_path / "b.tsv", ["5\t5\t6"])
    ds = load_dataset(tmp_path / "a.tsv", tmp_path / "b.tsv")
    assert sorted(set(ds.labels.tolist())) == [0, 1]
    assert ds.class_count == 2


def test_comma_separator_sniffed(tmp_path):
    _write(tmp_path / "a.csv", ["1,0.5,0.25", "2,0.1,0.9"])
    _write(tmp_path / "b.csv", ["1,1,2"])
    ds = load_dataset(tmp_path / "a.csv", tmp_path / "b.csv")
    assert len(ds) == 3
    np.testing.assert_allclose(ds.values[0], [0.5, 0.25])


def test_gzip_transparent(tmp_path):
    with gzip.open(tmp_path / "a.tsv.gz", "wt") as fh:
        fh.write("1\t1\t2\t3\n")
    _write(tmp_path / "b.tsv", ["2\t4\t5\t6"])
    ds = load_dataset(tmp_path / "a.tsv.gz", tmp_path / "b.tsv")
    assert len(ds) == 2


def test_gunpoint_format_fixture(tmp_path):
    # 2 classes, series length 150, labels {1, 2}
    rng = np.random.default_rng(0)
    lines_train = [
        "\t".join([str(1 + i % 2)] + [f"{v:.6f}" for v in rng.normal(size=150)])
        for i in range(8)
    ]
    lines_test = [
        "\t".join([str(1 + i % 2)] + [f"{v:.6f}" for v in rng.normal(size=150)])
        for i in range(4)
    ]
    _write(tmp_path / "GunPoint_TRAIN.tsv", lines_train)
    _write(tmp_path / "GunPoint_TEST.tsv", lines_test)
    ds = load_dataset(tmp_path / "GunPoint_TRAIN.tsv", tmp_path / "GunPoint_TEST.tsv")
    assert ds.class_count == 2
    assert ds.signal_length == 150
    assert ds.name == "GunPoint"


def test_nonnumeric_rows_rejected(tmp_path):
    _write(tmp_path / "a.tsv", ["1\t1\t2", "oops\tx\ty", "2\t3\t4"])
    _write(tmp_path / "b.tsv", ["1\t5\t6"])
    ds = load_dataset(tmp_path / "a.tsv", tmp_path / "b.tsv")
    assert len(ds) == 3


def test_inconsistent_row_lengths_rejected(tmp_path):
    _write(tmp_path / "a.tsv", ["1\t1\t2\t3"])
    _write(tmp_path / "b.tsv", ["1\t1\t2"])
    with pytest.raises(DatasetError, match="inconsistent"):
        load_dataset(tmp_path / "a.tsv", tmp_path / "b.tsv")


def test_missing_file_rejected(tmp_path):
    _write(tmp_path / "a.tsv", ["1\t1\t2"])
    with pytest.raises(DatasetError, match="not found"):
        load_dataset(tmp_path / "a.tsv", tmp_path / "nope.tsv")


def test_empty_dataset_rejected(tmp_path):
    (tmp_path / "a.tsv").write_text("")
    (tmp_path / "b.tsv").write_text("")
    with pytest.raises(DatasetError, match="no usable rows"):
        load_dataset(tmp_path / "a.tsv", tmp_path / "b.tsv")


def test_size_category_boundaries():
    assert size_category(499) == "small"
    assert size_category(500) == "medium"
    assert size_category(1000) == "medium"
    assert size_category(1001) == "large"


@given(st.integers(min_value=1, max_value=5000), st.integers(min_value=0, max_value=100))
@settings(max_examples=50, deadline=None)
def test_size_category_monotone(n, bump):
    order = {"small": 0, "medium": 1, "large": 2}
    assert order[size_category(n + bump)] >= order[size_category(n)]


def test_znormalize_two_points():
    np.testing.assert_allclose(znormalize(np.array([0.0, 2.0])), [-1.0, 1.0], atol=1e-7)


def test_znormalize_constant_guarded():
    np.testing.assert_array_equal(znormalize(np.array([5.0, 5.0, 5.0])), [0.0, 0.0, 0.0])


def test_znormalize_statistics():
    x = np.random.default_rng(1).normal(3.0, 2.5, size=400)
    z = znormalize(x).astype(np.float64)
    assert abs(z.mean()) < 1e-6
    assert abs(z.std() - 1.0) < 1e-5


def test_standardize_length_linear():
    np.testing.assert_allclose(standardize_length(np.array([0.0, 1.0]), 3), [0.0, 0.5, 1.0], atol=1e-7)
    out = standardize_length(np.array([0.0, 1.0, 2.0]), 3)
    np.testing.assert_array_equal(out, [0.0, 1.0, 2.0])


def test_standardize_length_endpoints_and_ramp():
    ramp = np.linspace(0.0, 1.0, 37)
    out = standardize_length(ramp, 64).astype(np.float64)
    ideal = np.linspace(0.0, 1.0, 64)
    assert np.abs(out - ideal).max() < 1e-6


def test_prepare_idempotent(tmp_path):
    ds = make_sine_square_dataset(4, 4, length=100, seed=2)
    once = prepare_dataset(ds, hop=8)
    assert once.signal_length == 104
    twice = prepare_dataset(once, hop=8)
    assert twice.signal_length == once.signal_length
    np.testing.assert_allclose(twice.values, once.values, atol=1e-5)


def test_write_then_load_roundtrip(tmp_path):
    ds = make_sine_square_dataset(3, 2, length=16, seed=5)
    tr_l, tr_v = ds.train_split()
    te_l, te_v = ds.test_split()
    write_ucr_file(tmp_path / "t_TRAIN.tsv", tr_l, tr_v)
    write_ucr_file(tmp_path / "t_TEST.tsv", te_l, te_v)
    back = load_dataset(tmp_path / "t_TRAIN.tsv", tmp_path / "t_TEST.tsv")
    assert len(back) == len(ds)
    np.testing.assert_allclose(back.values, ds.values, rtol=1e-6, atol=1e-6)
    np.testing.assert_array_equal(back.labels, ds.labels)


def test_toy_dataset_shape():
    ds = make_sine_square_dataset(30, 30, length=128, seed=0)
    assert len(ds) == 120
    assert ds.class_count == 2
    assert ds.n_train == 60
    assert ds.size_category == "small"
