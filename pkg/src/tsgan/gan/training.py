"""Training loops: interleaved two-stage schedule, baseline GAN, sampling.

One optimization step = n_critic critic updates followed by one generator
update, per stage.  Stage 1 trains on spectrogram images of the real series;
stage 2 trains on the series themselves, conditioned on a configurable mix
of real spectrograms and fresh stage-1 outputs.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, fields

import numpy as np

from ..autodiff import Tensor, backward, no_grad
from ..nn import adam_step, network_forward, weight_clip
from ..spectrogram import spectrogram_batch
from .config import SeedStreams, TsganConfig, derived_seed
from .losses import (
    TrainingDiverged,
    critic_loss_stage1,
    critic_loss_stage2,
    generator_loss_stage1,
    generator_loss_stage2,
    sample_latent,
)
from .models import (
    SERIES_CRITIC,
    SERIES_GENERATOR,
    SPEC_CRITIC,
    SPEC_GENERATOR,
    TsganModel,
    build_baseline_model,
    build_tsgan_model,
    output_scale_for,
)

TSGAN_STREAMS = (
    "batch",
    "z_critic1",
    "z_gen1",
    "z_critic2",
    "z_gen2",
    "cond_z",
    "cond_pick",
    "interp1",
    "interp2",
    "noise_g",
    "noise_f",
    "noise_dx",
    "noise_dy",
)
BASELINE_STREAMS = (
    "batch",
    "z_critic2",
    "z_gen2",
    "interp2",
    "noise_f",
    "noise_dy",
)


@dataclass
class TrainStepRecord:
    """Per-step losses and diagnostics; baseline runs leave the spectrogram
    -stage fields at zero."""

    step: int = 0
    d_loss_spec: float = 0.0
    d_loss_series: float = 0.0
    g_loss_spec: float = 0.0
    g_loss_series: float = 0.0
    gp_spec: float = 0.0
    gp_series: float = 0.0
    grad_norm_spec: float = 0.0
    grad_norm_series: float = 0.0
    wall_time: float = 0.0

    def is_finite(self) -> bool:
        return all(
            np.isfinite(getattr(self, f.name))
            for f in fields(self)
            if f.name not in ("step", "wall_time")
        )


@dataclass
class TrainLog:
    records: list[TrainStepRecord] = field(default_factory=list)

    def append(self, rec: TrainStepRecord) -> None:
        if self.records and rec.step <= self.records[-1].step:
            raise ValueError(f"step ids must increase, got {rec.step} after {self.records[-1].step}")
        self.records.append(rec)

    def terminal_grad_norm(self, last_k: int = 10) -> float:
        """Mean interpolate-gradient norm over the final records, averaged
        across whichever stages actually ran (skipped stages log zero)."""
        tail = self.records[-last_k:]
        per_rec = []
        for r in tail:
            norms = [n for n in (r.grad_norm_spec, r.grad_norm_series) if n > 0]
            if norms:
                per_rec.append(float(np.mean(norms)))
        return float(np.mean(per_rec)) if per_rec else float("nan")

    def all_finite(self) -> bool:
        return all(r.is_finite() for r in self.records)


def _critic_update(model, net_name, loss) -> None:
    net = model.nets[net_name]
    grads = backward(loss, net.params.values())
    adam_step(model.opts[net_name], net.params, grads)


def _mixed_conditions(
    model: TsganModel, batch_specs: np.ndarray, m: int, streams: SeedStreams
) -> Tensor:
    """Conditioning images for stage 2: a seeded mix of generated
    spectrograms and real ones from the current batch."""
    cfg = model.config
    n_synth = int(round(cfg.synthetic_condition_fraction * m))
    parts = []
    if n_synth > 0:
        z = sample_latent(n_synth, cfg.z_dim, streams["cond_z"])
        with no_grad():
            parts.append(network_forward(model.nets[SPEC_GENERATOR], z, training=False).data)
    if n_synth < m:
        idx = streams["cond_pick"].integers(0, batch_specs.shape[0], size=m - n_synth)
        parts.append(batch_specs[idx])
    return Tensor(np.concatenate(parts, axis=0).astype(np.float32))


STAGE_SPEC = "spec"
STAGE_SERIES = "series"
BOTH_STAGES = (STAGE_SPEC, STAGE_SERIES)


def train_step(
    model: TsganModel,
    real_series: np.ndarray,
    real_specs: np.ndarray | None,
    streams: SeedStreams,
    stages: tuple[str, ...] = BOTH_STAGES,
) -> TrainStepRecord:
    """One full optimization step; returns its log record.

    ``stages`` restricts the step to a subset of stages (sequential-mode
    training runs them one after the other instead of interleaved).
    Non-finite losses raise TrainingDiverged carrying the partial record.
    """
    if model.kind == "tsgan":
        if real_specs is None:
            raise ValueError("two-stage training needs precomputed real spectrograms")
        return _train_step_tsgan(model, real_series, real_specs, streams, stages)
    return _train_step_baseline(model, real_series, streams)


def _train_step_tsgan(model, real_series, real_specs, streams, stages) -> TrainStepRecord:
    cfg = model.config
    m, length = real_series.shape
    series_t = Tensor(real_series.reshape(m, 1, length))
    specs_t = Tensor(real_specs)
    rec = TrainStepRecord(step=model.steps_done)
    start = time.perf_counter()
    try:
        if STAGE_SPEC in stages:
            d1 = []
            for _ in range(cfg.n_critic):
                z = sample_latent(m, cfg.z_dim, streams["z_critic1"])
                u = streams["interp1"].uniform(size=m) if cfg.gp_lambda > 0 else None
                loss, stats = critic_loss_stage1(
                    model.nets[SPEC_CRITIC], model.nets[SPEC_GENERATOR], specs_t, z,
                    cfg.gp_lambda, u=u,
                    g_rng=streams["noise_g"], d_rng=streams["noise_dx"],
                )
                _critic_update(model, SPEC_CRITIC, loss)
                d1.append(stats)
            rec.d_loss_spec = float(np.mean([s.loss for s in d1]))
            rec.gp_spec = float(np.mean([s.penalty for s in d1]))
            rec.grad_norm_spec = float(np.mean([s.grad_norm_mean for s in d1]))

            z = sample_latent(m, cfg.z_dim, streams["z_gen1"])
            g_loss, rec.g_loss_spec = generator_loss_stage1(
                model.nets[SPEC_CRITIC], model.nets[SPEC_GENERATOR], z,
                g_rng=streams["noise_g"], d_rng=streams["noise_dx"],
            )
            _critic_update(model, SPEC_GENERATOR, g_loss)

        if STAGE_SERIES in stages:
            d2 = []
            for _ in range(cfg.n_critic):
                z = sample_latent(m, cfg.z_dim, streams["z_critic2"])
                conditions = _mixed_conditions(model, real_specs, m, streams)
                u = streams["interp2"].uniform(size=m) if cfg.gp_lambda > 0 else None
                loss, stats = critic_loss_stage2(
                    model.nets[SERIES_CRITIC], model.nets[SERIES_GENERATOR],
                    model.nets[SPEC_GENERATOR], series_t, z,
                    cfg.gp_lambda, conditions=conditions, u=u,
                    f_rng=streams["noise_f"], d_rng=streams["noise_dy"],
                )
                _critic_update(model, SERIES_CRITIC, loss)
                d2.append(stats)
            rec.d_loss_series = float(np.mean([s.loss for s in d2]))
            rec.gp_series = float(np.mean([s.penalty for s in d2]))
            rec.grad_norm_series = float(np.mean([s.grad_norm_mean for s in d2]))

            conditions = _mixed_conditions(model, real_specs, m, streams)
            f_loss, rec.g_loss_series = generator_loss_stage2(
                model.nets[SERIES_CRITIC], model.nets[SERIES_GENERATOR], conditions,
                f_rng=streams["noise_f"], d_rng=streams["noise_dy"],
            )
            _critic_update(model, SERIES_GENERATOR, f_loss)
    except TrainingDiverged as err:
        rec.wall_time = time.perf_counter() - start
        err.record = rec  # type: ignore[attr-defined]
        raise
    rec.wall_time = time.perf_counter() - start
    model.steps_done += 1
    return rec


def _train_step_baseline(model, real_series, streams) -> TrainStepRecord:
    cfg = model.config
    m, length = real_series.shape
    series_t = Tensor(real_series.reshape(m, 1, length))
    rec = TrainStepRecord(step=model.steps_done)
    clip_mode = cfg.gp_lambda == 0 and cfg.clip_bound is not None
    start = time.perf_counter()
    try:
        stats_all = []
        for _ in range(cfg.n_critic):
            z = sample_latent(m, cfg.z_dim, streams["z_critic2"])
            u = streams["interp2"].uniform(size=m) if cfg.gp_lambda > 0 else None
            # The baseline generator plays the same role the image generator
            # plays in stage 1, just over series.
            loss, stats = critic_loss_stage1(
                model.nets[SERIES_CRITIC], model.nets[SERIES_GENERATOR], series_t, z,
                cfg.gp_lambda, u=u,
                g_rng=streams["noise_f"], d_rng=streams["noise_dy"],
            )
            _critic_update(model, SERIES_CRITIC, loss)
            if clip_mode:
                weight_clip(model.nets[SERIES_CRITIC].params, cfg.clip_bound)
            stats_all.append(stats)
        rec.d_loss_series = float(np.mean([s.loss for s in stats_all]))
        rec.gp_series = float(np.mean([s.penalty for s in stats_all]))
        rec.grad_norm_series = float(np.mean([s.grad_norm_mean for s in stats_all]))

        z = sample_latent(m, cfg.z_dim, streams["z_gen2"])
        g_loss, rec.g_loss_series = generator_loss_stage1(
            model.nets[SERIES_CRITIC], model.nets[SERIES_GENERATOR], z,
            g_rng=streams["noise_f"], d_rng=streams["noise_dy"],
        )
        _critic_update(model, SERIES_GENERATOR, g_loss)
    except TrainingDiverged as err:
        rec.wall_time = time.perf_counter() - start
        err.record = rec  # type: ignore[attr-defined]
        raise
    rec.wall_time = time.perf_counter() - start
    model.steps_done += 1
    return rec


def make_streams(cfg: TsganConfig, kind: str, tags: tuple[str, ...]) -> SeedStreams:
    names = TSGAN_STREAMS if kind == "tsgan" else BASELINE_STREAMS
    return SeedStreams(cfg.seed, tags + (kind,), names)


def train_model(
    values: np.ndarray,
    cfg: TsganConfig,
    kind: str = "tsgan",
    *,
    steps: int | None = None,
    tags: tuple[str, ...] = (),
    model: TsganModel | None = None,
    streams: SeedStreams | None = None,
    log: TrainLog | None = None,
    checkpoint_every: int | None = None,
    on_checkpoint=None,
) -> tuple[TsganModel, SeedStreams, TrainLog]:
    """Train one model on one class's series (resumable).

    Pass a previously checkpointed (model, streams, log) triple to continue
    from model.steps_done; otherwise a fresh model is built from cfg.seed.
    """
    if kind not in ("tsgan", "wgan-baseline"):
        raise ValueError(f"unknown model kind '{kind}'")
    values = np.asarray(values, dtype=np.float32)
    n, length = values.shape
    m = min(cfg.batch_size, n)
    if model is None:
        scale = output_scale_for(values)
        model = (
            build_tsgan_model(cfg, length, scale)
            if kind == "tsgan"
            else build_baseline_model(cfg, length, scale)
        )
        streams = make_streams(cfg, kind, tags)
        log = TrainLog()
    assert streams is not None and log is not None
    if steps is None:
        steps = cfg.epochs * math.ceil(n / m)
    spec_all = spectrogram_batch(values, cfg.stft) if kind == "tsgan" else None
    # Sequential mode trains the image stage for the first half of the step
    # budget and the series stage (against the then-frozen image generator)
    # for the second half; the default interleaves both every step.
    phase1_end = steps - steps // 2
    for _ in range(model.steps_done, steps):
        idx = streams["batch"].choice(n, size=m, replace=bool(n < m))
        batch_specs = spec_all[idx] if spec_all is not None else None
        stages = BOTH_STAGES
        if cfg.sequential_stages and kind == "tsgan":
            stages = (STAGE_SPEC,) if model.steps_done < phase1_end else (STAGE_SERIES,)
        try:
            rec = train_step(model, values[idx], batch_specs, streams, stages)
        except TrainingDiverged as err:
            log.append(getattr(err, "record", TrainStepRecord(step=model.steps_done)))
            raise
        log.append(rec)
        if (
            checkpoint_every
            and on_checkpoint is not None
            and model.steps_done % checkpoint_every == 0
        ):
            on_checkpoint(model, streams, log)
    return model, streams, log


def sample_synthetic(model: TsganModel, n: int, seed: int) -> np.ndarray:
    """Draw n inference-mode series, (n, signal_length); deterministic per seed."""
    length = model.signal_length
    if n == 0:
        return np.zeros((0, length), dtype=np.float32)
    rng = np.random.Generator(np.random.PCG64(derived_seed(seed, "sample", model.kind)))
    out = []
    remaining = n
    with no_grad():
        while remaining > 0:
            take = min(64, remaining)
            z = sample_latent(take, model.config.z_dim, rng)
            if model.kind == "tsgan":
                specs = network_forward(model.nets[SPEC_GENERATOR], z, training=False)
                series = network_forward(model.nets[SERIES_GENERATOR], specs, training=False)
            else:
                series = network_forward(model.nets[SERIES_GENERATOR], z, training=False)
            out.append(series.data.reshape(take, length))
            remaining -= take
    return np.concatenate(out, axis=0).astype(np.float32)


def sample_conditions(model: TsganModel, n: int, seed: int) -> np.ndarray:
    """The spectrogram images behind sample_synthetic's draws (two-stage only)."""
    if model.kind != "tsgan":
        raise ValueError("baseline models have no conditioning images")
    if n == 0:
        hw = model.spec_hw
        return np.zeros((0, 3) + hw, dtype=np.float32)
    rng = np.random.Generator(np.random.PCG64(derived_seed(seed, "sample", model.kind)))
    out = []
    remaining = n
    with no_grad():
        while remaining > 0:
            take = min(64, remaining)
            z = sample_latent(take, model.config.z_dim, rng)
            out.append(network_forward(model.nets[SPEC_GENERATOR], z, training=False).data)
            remaining -= take
    return np.concatenate(out, axis=0).astype(np.float32)
