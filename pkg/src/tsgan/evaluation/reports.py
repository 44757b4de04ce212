"""Report serialization: line-delimited records plus rendered tables.

Record files are tab-separated with a fixed, documented column order and a
header line, so they are both grep-able and trivially machine-readable.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .frechet import FidReport
from .protocols import ClassificationReport

FID_COLUMNS = (
    "dataset",
    "model",
    "fid",
    "n_real",
    "n_synthetic",
    "real_mean_norm",
    "real_cov_trace",
    "synthetic_mean_norm",
    "synthetic_cov_trace",
    "low_sample",
)

CLASSIFICATION_COLUMNS = (
    "dataset",
    "model",
    "protocol",
    "accuracy",
    "train_sizes",
    "test_sizes",
    "confusion",
)


def fid_record(report: FidReport) -> str:
    vals = [getattr(report, c) for c in FID_COLUMNS]
    return "\t".join(_fmt(v) for v in vals)


def classification_record(report: ClassificationReport, dataset: str, model: str) -> str:
    vals = [
        dataset,
        model,
        report.protocol,
        report.accuracy,
        _kv(report.train_sizes),
        _kv(report.test_sizes),
        ",".join(str(int(v)) for v in report.confusion.reshape(-1)),
    ]
    return "\t".join(_fmt(v) for v in vals)


def write_records(path, header: tuple[str, ...], lines: list[str]) -> None:
    Path(path).write_text("\t".join(header) + "\n" + "".join(ln + "\n" for ln in lines))


def read_records(path) -> list[dict[str, str]]:
    lines = Path(path).read_text().splitlines()
    if not lines:
        return []
    header = lines[0].split("\t")
    return [dict(zip(header, ln.split("\t"))) for ln in lines[1:]]


def _kv(d: dict) -> str:
    return ",".join(f"{k}:{v}" for k, v in sorted(d.items()))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".6f")
    return str(v)


def format_table(headers: list[str], rows: list[list[str]]) -> str:
    """Monospace table with column alignment."""
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*headers), fmt.format(*["-" * w for w in widths])]
    out.extend(fmt.format(*row) for row in rows)
    return "\n".join(out) + "\n"


def comparison_row(
    dataset: str,
    baseline_trts: float | None,
    tsgan_trts: float | None,
    baseline_tstr: float | None,
    tsgan_tstr: float | None,
    trtr_acc: float | None,
) -> list[str]:
    """One six-column row: dataset, baseline/tsgan TRTS, baseline/tsgan TSTR, TRTR."""
    def cell(v):
        return "-" if v is None else format(v, ".2f")

    return [dataset, cell(baseline_trts), cell(tsgan_trts), cell(baseline_tstr), cell(tsgan_tstr), cell(trtr_acc)]


COMPARISON_HEADERS = ["dataset", "wgan_trts", "tsgan_trts", "wgan_tstr", "tsgan_tstr", "trtr"]
