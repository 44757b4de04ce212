"""Wasserstein losses with gradient penalty for both pipeline stages.

Sign convention: every function returns the quantity its optimizer
minimizes.  Critic losses are -(E[D(real)] - E[D(fake)]) + penalty;
generator losses are -E[D(fake)].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..autodiff import Tensor, grad_with_graph, no_grad, ops
from ..autodiff.tensor import ShapeError
from ..nn import Network, network_forward

NORM_EPS = 1e-12  # stabilizes the norm gradient at exactly-zero critic gradients


class TrainingDiverged(RuntimeError):
    """A loss became non-finite; training must stop, not continue silently."""


def sample_latent(m: int, z_dim: int, rng: np.random.Generator) -> Tensor:
    """(m, z_dim) of i.i.d. standard normal draws from the given stream."""
    if m < 1 or z_dim < 1:
        raise ValueError(f"need positive extents, got m={m} z_dim={z_dim}")
    return Tensor(rng.standard_normal((m, z_dim), dtype=np.float32))


def interpolate(real: Tensor, fake: Tensor, u: np.ndarray) -> Tensor:
    """Per-sample straight-line mix u*real + (1-u)*fake, u in [0, 1]."""
    if real.shape != fake.shape:
        raise ShapeError(f"interpolate: real {real.shape} != fake {fake.shape}")
    u = np.asarray(u, dtype=np.float32).reshape((real.shape[0],) + (1,) * (real.ndim - 1))
    return Tensor(u * real.data + (1.0 - u) * fake.data)


def penalty_terms(critic: Network, x_hat: Tensor, lam: float) -> tuple[Tensor, np.ndarray]:
    """Gradient penalty plus the per-sample critic input-gradient norms.

    The returned scalar is differentiable w.r.t. critic parameters (the inner
    gradient is taken with a graph).  The critic runs in inference mode here
    so the penalty is a deterministic function of its parameters.
    """
    x = Tensor(x_hat.data, requires_grad=True)
    scores = network_forward(critic, x, training=False)
    if scores.size != x.shape[0]:
        raise ShapeError(
            f"critic must output one scalar per sample, got {scores.shape} for batch {x.shape[0]}"
        )
    grad = grad_with_graph(ops.sum(scores), x)
    norms = ops.l2_norm(grad, axis=tuple(range(1, x.ndim)), eps=NORM_EPS)
    penalty = ops.mul(float(lam), ops.mean(ops.square(ops.sub(norms, 1.0))))
    return penalty, norms.data.copy()


def gradient_penalty(critic: Network, x_hat: Tensor, lam: float) -> Tensor:
    """lam * E[(||grad_x D(x)||_2 - 1)^2] over the interpolated batch."""
    return penalty_terms(critic, x_hat, lam)[0]


@dataclass
class LossStats:
    loss: float
    wasserstein: float
    penalty: float
    grad_norm_mean: float


def _critic_objective(
    critic: Network,
    real: Tensor,
    fake: Tensor,
    lam: float,
    u: np.ndarray,
    rng: np.random.Generator | None,
) -> tuple[Tensor, LossStats]:
    s_real = network_forward(critic, real, training=True, rng=rng)
    s_fake = network_forward(critic, fake, training=True, rng=rng)
    w_term = ops.sub(ops.mean(s_real), ops.mean(s_fake))
    loss = ops.neg(w_term)
    pen_value = 0.0
    norm_mean = 0.0
    if lam > 0:
        x_hat = interpolate(real, fake, u)
        penalty, norms = penalty_terms(critic, x_hat, lam)
        loss = ops.add(loss, penalty)
        pen_value = float(penalty.item())
        norm_mean = float(norms.mean())
    stats = LossStats(
        loss=float(loss.item()),
        wasserstein=float(w_term.item()),
        penalty=pen_value,
        grad_norm_mean=norm_mean,
    )
    if not np.isfinite(stats.loss):
        raise TrainingDiverged(f"critic loss is non-finite: {stats.loss}")
    return loss, stats


def critic_loss_stage1(
    d_x: Network,
    g: Network,
    real_specs: Tensor,
    z_batch: Tensor,
    lam: float,
    *,
    u: np.ndarray | None = None,
    g_rng: np.random.Generator | None = None,
    d_rng: np.random.Generator | None = None,
) -> tuple[Tensor, LossStats]:
    """Spectrogram critic objective; generated images are constants here."""
    with no_grad():
        fake = network_forward(g, z_batch, training=True, rng=g_rng)
    if u is None:
        u = np.ones(real_specs.shape[0], dtype=np.float32)
    return _critic_objective(d_x, real_specs, fake.detach(), lam, u, d_rng)


def critic_loss_stage2(
    d_y: Network,
    f: Network,
    g: Network,
    real_series: Tensor,
    z_batch: Tensor,
    lam: float,
    *,
    conditions: Tensor | None = None,
    u: np.ndarray | None = None,
    f_rng: np.random.Generator | None = None,
    d_rng: np.random.Generator | None = None,
) -> tuple[Tensor, LossStats]:
    """Series critic objective; the series generator runs on conditioning
    images (by default fresh inference-mode outputs of the image generator)
    and is treated as a constant."""
    with no_grad():
        if conditions is None:
            conditions = network_forward(g, z_batch, training=False)
        fake = network_forward(f, conditions, training=True, rng=f_rng)
    if u is None:
        u = np.ones(real_series.shape[0], dtype=np.float32)
    return _critic_objective(d_y, real_series, fake.detach(), lam, u, d_rng)


def generator_loss_stage1(
    d_x: Network,
    g: Network,
    z_batch: Tensor,
    *,
    g_rng: np.random.Generator | None = None,
    d_rng: np.random.Generator | None = None,
) -> tuple[Tensor, float]:
    """-E[D_x(G(z))]; only the image generator's update consumes this."""
    fake = network_forward(g, z_batch, training=True, rng=g_rng)
    scores = network_forward(d_x, fake, training=True, rng=d_rng)
    loss = ops.neg(ops.mean(scores))
    value = float(loss.item())
    if not np.isfinite(value):
        raise TrainingDiverged(f"generator loss is non-finite: {value}")
    return loss, value


def generator_loss_stage2(
    d_y: Network,
    f: Network,
    spec_batch: Tensor,
    *,
    f_rng: np.random.Generator | None = None,
    d_rng: np.random.Generator | None = None,
) -> tuple[Tensor, float]:
    """-E[D_y(F(specs))]; conditioning images are constants."""
    fake = network_forward(f, spec_batch.detach(), training=True, rng=f_rng)
    scores = network_forward(d_y, fake, training=True, rng=d_rng)
    loss = ops.neg(ops.mean(scores))
    value = float(loss.item())
    if not np.isfinite(value):
        raise TrainingDiverged(f"generator loss is non-finite: {value}")
    return loss, value
