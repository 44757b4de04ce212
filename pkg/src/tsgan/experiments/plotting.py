"""Static SVG panels of sampled series, three rows per class.

Hand-rolled SVG keeps the output byte-deterministic (no library version
strings or timestamps) and trivially checkable as XML.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

CELL_W = 170
CELL_H = 90
PAD = 8
LABEL_H = 18
STROKE = "#1f77b4"


def _polyline(series: np.ndarray, x0: float, y0: float) -> str:
    y = np.asarray(series, dtype=np.float64)
    lo, hi = float(y.min()), float(y.max())
    span = hi - lo if hi > lo else 1.0
    n = len(y)
    xs = x0 + PAD + (CELL_W - 2 * PAD) * np.arange(n) / max(n - 1, 1)
    ys = y0 + CELL_H - PAD - (CELL_H - 2 * PAD) * (y - lo) / span
    points = " ".join(f"{x:.2f},{v:.2f}" for x, v in zip(xs, ys))
    return (
        f'<polyline fill="none" stroke="{STROKE}" stroke-width="1" points="{points}"/>'
    )


def series_panel_svg(rows: list[tuple[str, list[np.ndarray]]], per_row: int = 5) -> str:
    """Rows of small line plots; each row is (title, series list)."""
    n_rows = len(rows)
    width = per_row * CELL_W + 2 * PAD
    height = n_rows * (CELL_H + LABEL_H) + 2 * PAD
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for r, (title, series_list) in enumerate(rows):
        y0 = PAD + r * (CELL_H + LABEL_H)
        parts.append(
            f'<text x="{PAD}" y="{y0 + 12}" font-family="monospace" font-size="11">{title}</text>'
        )
        for c, series in enumerate(series_list[:per_row]):
            x0 = PAD + c * CELL_W
            cy = y0 + LABEL_H
            parts.append(
                f'<rect x="{x0}" y="{cy}" width="{CELL_W - 4}" height="{CELL_H - 4}" '
                'fill="none" stroke="#cccccc" stroke-width="0.5"/>'
            )
            if len(series):
                parts.append(_polyline(series, x0, cy))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_class_panel(
    path,
    baseline_samples: np.ndarray | None,
    tsgan_samples: np.ndarray | None,
    real_samples: np.ndarray,
    per_row: int = 5,
) -> None:
    """Three-row comparison figure: baseline on top, then the two-stage
    model, real data at the bottom."""
    def take(arr):
        if arr is None or len(arr) == 0:
            return []
        return [arr[i] for i in range(min(per_row, len(arr)))]

    rows = [
        ("baseline (wgan)" if baseline_samples is not None else "baseline (wgan): no samples", take(baseline_samples)),
        ("tsgan" if tsgan_samples is not None else "tsgan: no samples", take(tsgan_samples)),
        ("real", take(real_samples)),
    ]
    svg = series_panel_svg(rows, per_row=per_row)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg)
