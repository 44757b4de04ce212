"""Central finite differences, the independent reference for gradient tests."""
from __future__ import annotations

from typing import Callable

import numpy as np

from .tensor import Tensor, raw_tensor


def finite_difference_oracle(
    f: Callable[[Tensor], float], x: Tensor, h: float = 1e-3
) -> np.ndarray:
    """Per-coordinate central difference (f(x+h*e_i) - f(x-h*e_i)) / (2h).

    ``f`` must be pure and deterministic; it receives a tensor of x's shape
    and returns a scalar (float or scalar tensor).  Perturbed inputs are fed
    through as float64 so the estimate is limited by h, not by float32
    rounding; ``f`` may build graphs internally (e.g. penalty terms that take
    inner gradients).
    """
    base = x.data.astype(np.float64)
    flat = base.reshape(-1)
    grad = np.empty_like(flat)
    for i in range(flat.size):
        bumped = flat.copy()
        bumped[i] = flat[i] + h
        hi = _scalar(f(raw_tensor(bumped.reshape(base.shape))))
        bumped[i] = flat[i] - h
        lo = _scalar(f(raw_tensor(bumped.reshape(base.shape))))
        grad[i] = (hi - lo) / (2.0 * h)
    return grad.reshape(base.shape)


def _scalar(v) -> float:
    if isinstance(v, Tensor):
        return v.item()
    return float(v)
