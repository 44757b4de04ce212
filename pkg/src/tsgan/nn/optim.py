"""Adam updates and the legacy weight-clipping rule."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..autodiff import Tensor


@dataclass
class AdamState:
    """Per-parameter moment accumulators plus hyperparameters."""

    lr: float = 1e-4
    beta1: float = 0.0
    beta2: float = 0.9
    eps: float = 1e-8
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    def tensors_for_checkpoint(self) -> dict[str, np.ndarray]:
        out = {f"m.{k}": arr for k, arr in self.m.items()}
        out.update({f"v.{k}": arr for k, arr in self.v.items()})
        return out

    def load_tensors(self, tensors: dict[str, np.ndarray]) -> None:
        self.m = {
            k[2:]: arr.astype(np.float32) for k, arr in tensors.items() if k.startswith("m.")
        }
        self.v = {
            k[2:]: arr.astype(np.float32) for k, arr in tensors.items() if k.startswith("v.")
        }


def adam_step(
    state: AdamState,
    params: dict[str, Tensor],
    grads: dict[Tensor, Tensor],
) -> None:
    """Standard bias-corrected Adam update, in place.

    Parameters without a gradient entry are left untouched; the step counter
    advances regardless.
    """
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    m_corr = 1.0 - b1**t
    v_corr = 1.0 - b2**t
    for name, p in params.items():
        g = grads.get(p)
        if g is None:
            continue
        if g.shape != p.shape:
            raise ValueError(f"gradient shape {g.shape} != parameter '{name}' shape {p.shape}")
        gd = g.data.astype(np.float32)
        m = state.m.get(name)
        v = state.v.get(name)
        if m is None:
            m = np.zeros_like(gd)
            v = np.zeros_like(gd)
        m = b1 * m + (1.0 - b1) * gd
        v = b2 * v + (1.0 - b2) * gd * gd
        state.m[name] = m
        state.v[name] = v
        update = state.lr * (m / m_corr) / (np.sqrt(v / v_corr) + state.eps)
        p.data = (p.data - update).astype(np.float32)


def weight_clip(params: dict[str, Tensor], c: float) -> None:
    """Clamp every parameter entry into [-c, c] (legacy baseline mode)."""
    if c <= 0:
        raise ValueError(f"clip bound must be positive, got {c}")
    for p in params.values():
        np.clip(p.data, -c, c, out=p.data)
