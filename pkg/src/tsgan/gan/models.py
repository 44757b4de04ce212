"""Network architectures for both pipeline stages and the 1-d baseline.

Stage 1 maps a latent vector to a spectrogram image; stage 2 encodes that
image and decodes a univariate series.  Critics are plain strided conv
stacks without batch norm (it would couple samples inside the gradient
penalty).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..nn import AdamState, Network, build_network, init_parameters
from ..nn import layers as L
from .config import TsganConfig, derived_seed

GAN_ADAM = dict(lr=1e-4, beta1=0.0, beta2=0.9)

SPEC_GENERATOR = "spec_generator"
SERIES_GENERATOR = "series_generator"
SPEC_CRITIC = "spec_critic"
SERIES_CRITIC = "series_critic"
STAGE1 = (SPEC_GENERATOR, SPEC_CRITIC)
STAGE2 = (SERIES_GENERATOR, SERIES_CRITIC)


def build_spec_generator(cfg: TsganConfig, spec_hw: tuple[int, int]) -> Network:
    """Latent vector -> (3, H, W) spectrogram image in [0, 1]."""
    base = cfg.g_channels
    h, w = spec_hw
    specs = [
        L.dense(4 * 4 * base),
        L.noise_inject(cfg.noise_stddev),
        L.reshape((base, 4, 4)),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose2d(base // 2, 4, 2, 1),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose2d(base // 4, 4, 2, 1),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose2d(3, 4, 2, 1),
        L.sigmoid(),
    ]
    if (h, w) != (32, 32):
        specs.append(L.resize2d(h, w))
    return build_network((cfg.z_dim,), specs)


def build_spec_critic(cfg: TsganConfig, spec_hw: tuple[int, int]) -> Network:
    """(3, H, W) spectrogram image -> unbounded scalar score."""
    base = cfg.dx_channels
    h, w = spec_hw
    specs = [
        L.noise_inject(cfg.noise_stddev),
        L.conv2d(base, 4, 2, 1),
        L.leaky_relu(),
        L.conv2d(base * 2, 4, 2, 1),
        L.leaky_relu(),
        L.conv2d(base * 4, 4, 2, 1),
        L.leaky_relu(),
    ]
    net = build_network((3, h, w), specs)
    flat = int(math.prod(net.output_shape))
    specs = specs + [L.reshape((flat,)), L.dense(1)]
    return build_network((3, h, w), specs)


def build_series_generator(
    cfg: TsganConfig, spec_hw: tuple[int, int], signal_length: int, output_scale: float = 1.0
) -> Network:
    """(3, H, W) conditioning image -> (1, L) series.

    The tanh output is stretched by ``output_scale`` so z-normalized series
    (whose peaks exceed 1) stay representable."""
    enc = cfg.f_channels
    h, w = spec_hw
    head = [
        L.conv2d(enc, 4, 2, 1),
        L.leaky_relu(),
        L.conv2d(enc * 2, 4, 2, 1),
        L.leaky_relu(),
        L.conv2d(enc * 4, 4, 2, 1),
        L.leaky_relu(),
    ]
    probe = build_network((3, h, w), head)
    flat = int(math.prod(probe.output_shape))
    base_len = max(1, math.ceil(signal_length / 8))
    dec_ch = enc * 4
    specs = head + [
        L.reshape((flat,)),
        L.dense(128),
        L.noise_inject(cfg.noise_stddev),
        L.leaky_relu(),
        L.dense(dec_ch * base_len),
        L.reshape((dec_ch, base_len)),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose1d(dec_ch // 2, 4, 2, 1),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose1d(dec_ch // 4, 4, 2, 1),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose1d(1, 4, 2, 1),
        L.tanh(),
    ]
    if output_scale != 1.0:
        specs.append(L.scale(output_scale))
    if base_len * 8 != signal_length:
        specs.append(L.resize1d(signal_length))
    return build_network((3, h, w), specs)


def build_series_critic(cfg: TsganConfig, signal_length: int) -> Network:
    """(1, L) series -> unbounded scalar score."""
    base = cfg.dy_channels
    specs = [
        L.noise_inject(cfg.noise_stddev),
        L.conv1d(base, 4, 2, 1),
        L.leaky_relu(),
        L.conv1d(base * 2, 4, 2, 1),
        L.leaky_relu(),
        L.conv1d(base * 4, 4, 2, 1),
        L.leaky_relu(),
    ]
    probe = build_network((1, signal_length), specs)
    flat = int(math.prod(probe.output_shape))
    specs = specs + [L.reshape((flat,)), L.dense(1)]
    return build_network((1, signal_length), specs)


def build_series_generator_unconditional(
    cfg: TsganConfig, signal_length: int, output_scale: float = 1.0
) -> Network:
    """Latent vector -> (1, L) series; the single-stage baseline generator."""
    dec_ch = cfg.f_channels * 4
    base_len = max(1, math.ceil(signal_length / 8))
    specs = [
        L.dense(dec_ch * base_len),
        L.noise_inject(cfg.noise_stddev),
        L.reshape((dec_ch, base_len)),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose1d(dec_ch // 2, 4, 2, 1),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose1d(dec_ch // 4, 4, 2, 1),
        L.batch_norm(),
        L.leaky_relu(),
        L.conv_transpose1d(1, 4, 2, 1),
        L.tanh(),
    ]
    if output_scale != 1.0:
        specs.append(L.scale(output_scale))
    if base_len * 8 != signal_length:
        specs.append(L.resize1d(signal_length))
    return build_network((cfg.z_dim,), specs)


@dataclass
class TsganModel:
    """Both stages' networks plus their optimizer states."""

    config: TsganConfig
    signal_length: int
    spec_hw: tuple[int, int]
    nets: dict[str, Network]
    opts: dict[str, AdamState] = field(default_factory=dict)
    steps_done: int = 0
    output_scale: float = 1.0

    @property
    def kind(self) -> str:
        return "tsgan" if SPEC_GENERATOR in self.nets else "wgan-baseline"

    def network_names(self) -> tuple[str, ...]:
        return tuple(self.nets)


def build_tsgan_model(cfg: TsganConfig, signal_length: int, output_scale: float = 1.0) -> TsganModel:
    """Fresh two-stage model with seed-derived initialization."""
    hw = (cfg.stft.n_bins, cfg.stft.n_frames(signal_length))
    nets = {
        SPEC_GENERATOR: build_spec_generator(cfg, hw),
        SERIES_GENERATOR: build_series_generator(cfg, hw, signal_length, output_scale),
        SPEC_CRITIC: build_spec_critic(cfg, hw),
        SERIES_CRITIC: build_series_critic(cfg, signal_length),
    }
    return _finish_model(cfg, signal_length, hw, nets, output_scale)


def build_baseline_model(cfg: TsganConfig, signal_length: int, output_scale: float = 1.0) -> TsganModel:
    """Fresh single-stage baseline: latent -> series GAN."""
    hw = (cfg.stft.n_bins, cfg.stft.n_frames(signal_length))
    nets = {
        SERIES_GENERATOR: build_series_generator_unconditional(cfg, signal_length, output_scale),
        SERIES_CRITIC: build_series_critic(cfg, signal_length),
    }
    return _finish_model(cfg, signal_length, hw, nets, output_scale)


def output_scale_for(values) -> float:
    """Stretch factor covering the training data's amplitude range."""
    import numpy as np

    peak = float(np.abs(values).max()) if len(values) else 1.0
    return max(1.0, peak)


def _finish_model(cfg, signal_length, hw, nets, output_scale=1.0) -> TsganModel:
    opts = {}
    for name, net in nets.items():
        init_parameters(net, derived_seed(cfg.seed, "init", name))
        opts[name] = AdamState(**GAN_ADAM)
    return TsganModel(
        config=cfg, signal_length=signal_length, spec_hw=hw, nets=nets, opts=opts,
        output_scale=output_scale,
    )
