"""Loading and normalizing labeled univariate series in UCR text format.

Each line is ``label <sep> v1 <sep> ... <sep> vN`` with a tab or comma
separator (sniffed from the first line).  Files may be gzip-compressed.
"""
from __future__ import annotations

import gzip
import logging
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

SMALL_MAX = 499
MEDIUM_MAX = 1000


class DatasetError(ValueError):
    pass


@dataclass
class SignalDataset:
    """Labeled univariate series; the first ``n_train`` rows came from the
    train file, the rest from the test file (the original split boundary)."""

    name: str
    labels: np.ndarray  # int64, contiguous 0..class_count-1
    values: np.ndarray  # float32, (n_signals, signal_length)
    n_train: int

    @property
    def signal_length(self) -> int:
        return int(self.values.shape[1])

    @property
    def class_count(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @property
    def size_category(self) -> str:
        return size_category(len(self.labels))

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def train_split(self) -> tuple[np.ndarray, np.ndarray]:
        return self.labels[: self.n_train], self.values[: self.n_train]

    def test_split(self) -> tuple[np.ndarray, np.ndarray]:
        return self.labels[self.n_train :], self.values[self.n_train :]

    def class_values(self, label: int) -> np.ndarray:
        return self.values[self.labels == label]


def size_category(n_signals: int) -> str:
    """Dataset size bucket by total signal count."""
    if n_signals < 1:
        raise DatasetError(f"need at least one signal, got {n_signals}")
    if n_signals <= SMALL_MAX:
        return "small"
    if n_signals <= MEDIUM_MAX:
        return "medium"
    return "large"


def load_dataset(train_path, test_path, name: str | None = None) -> SignalDataset:
    """Concatenate the train and test files into one dataset.

    Labels are remapped to contiguous 0-based ids (sorted by original value);
    rows containing non-numeric fields are rejected with a warning.
    """
    train_rows = _parse_file(train_path)
    test_rows = _parse_file(test_path)
    rows = train_rows + test_rows
    if not rows:
        raise DatasetError(f"no usable rows in {train_path} + {test_path}")
    lengths = {len(v) for _, v in rows}
    if len(lengths) != 1:
        raise DatasetError(f"inconsistent row lengths {sorted(lengths)} across {train_path}, {test_path}")
    raw_labels = sorted({lab for lab, _ in rows})
    remap = {lab: i for i, lab in enumerate(raw_labels)}
    labels = np.array([remap[lab] for lab, _ in rows], dtype=np.int64)
    values = np.stack([v for _, v in rows]).astype(np.float32)
    if name is None:
        name = Path(train_path).name.split(".")[0].removesuffix("_TRAIN")
    return SignalDataset(name=name, labels=labels, values=values, n_train=len(train_rows))


def _parse_file(path) -> list[tuple[float, np.ndarray]]:
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as fh:
        text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return []
    sep = "\t" if "\t" in lines[0] else ","
    rows: list[tuple[float, np.ndarray]] = []
    dropped = 0
    for ln in lines:
        fields = [f for f in ln.strip().split(sep) if f != ""]
        try:
            nums = np.array([float(f) for f in fields], dtype=np.float64)
        except ValueError:
            dropped += 1
            continue
        if len(nums) < 2:
            dropped += 1
            continue
        rows.append((float(nums[0]), nums[1:]))
    if dropped:
        logger.warning("%s: rejected %d non-numeric/short rows", path, dropped)
    return rows


def znormalize(series: np.ndarray) -> np.ndarray:
    """Center to mean 0, scale to unit stddev; constant series map to zeros."""
    x = np.asarray(series, dtype=np.float64)
    if x.size < 2:
        raise DatasetError(f"series too short to normalize: {x.size}")
    mu = x.mean()
    sd = x.std()
    if sd < 1e-8:
        return np.zeros(x.shape, dtype=np.float32)
    return ((x - mu) / sd).astype(np.float32)


def standardize_length(series: np.ndarray, target_length: int) -> np.ndarray:
    """Resample by linear interpolation; endpoints are preserved."""
    if target_length < 2:
        raise DatasetError(f"target length must be >= 2, got {target_length}")
    x = np.asarray(series, dtype=np.float64)
    n = x.size
    if n == target_length:
        return x.astype(np.float32)
    positions = np.linspace(0.0, n - 1, target_length)
    return np.interp(positions, np.arange(n), x).astype(np.float32)


def prepare_dataset(ds: SignalDataset, hop: int) -> SignalDataset:
    """Resample every series to the native length rounded up to a multiple of
    the hop (avoids ragged trailing frames), then z-normalize.

    Normalizing last makes the whole preparation idempotent on its output."""
    target = int(np.ceil(ds.signal_length / hop)) * hop
    target = max(target, 8)
    values = np.stack(
        [znormalize(standardize_length(v, target)) for v in ds.values]
    ).astype(np.float32)
    return replace(ds, values=values)


def write_ucr_file(path, labels, values, sep: str = "\t") -> None:
    """Write series in the dataset text format (label + values per line)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for lab, row in zip(labels, values):
            fields = [_format_number(float(lab))] + [_format_number(float(v)) for v in row]
            fh.write(sep.join(fields) + "\n")


def _format_number(v: float) -> str:
    return repr(v) if v != int(v) else str(int(v))


def make_sine_square_dataset(
    n_train_per_class: int,
    n_test_per_class: int,
    length: int = 128,
    seed: int = 0,
    name: str = "toy-sine-square",
) -> SignalDataset:
    """Two-class toy set: random-phase sines (class 0) vs. square waves
    (class 1), with mild amplitude jitter and additive noise."""
    rng = np.random.default_rng(seed)
    t = np.arange(length) / length

    def sine(r):
        phase = r.uniform(0, 2 * np.pi)
        cycles = r.uniform(2.5, 3.5)
        amp = r.uniform(0.8, 1.2)
        return amp * np.sin(2 * np.pi * cycles * t + phase) + r.normal(0, 0.05, size=length)

    def square(r):
        phase = r.uniform(0, 2 * np.pi)
        cycles = r.uniform(2.5, 3.5)
        amp = r.uniform(0.8, 1.2)
        return amp * np.sign(np.sin(2 * np.pi * cycles * t + phase)) + r.normal(0, 0.05, size=length)

    rows = []
    for split_n in (n_train_per_class, n_test_per_class):
        for label, gen in ((0, sine), (1, square)):
            for _ in range(split_n):
                rows.append((label, gen(rng)))
    labels = np.array([lab for lab, _ in rows], dtype=np.int64)
    values = np.stack([v for _, v in rows]).astype(np.float32)
    return SignalDataset(
        name=name, labels=labels, values=values, n_train=2 * n_train_per_class
    )
