"""Two-stage Wasserstein GAN with gradient penalty, plus the 1-d baseline."""
from .config import SeedStreams, TsganConfig, derived_seed
from .losses import (
    TrainingDiverged,
    critic_loss_stage1,
    critic_loss_stage2,
    generator_loss_stage1,
    generator_loss_stage2,
    gradient_penalty,
    interpolate,
    penalty_terms,
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
from .training import (
    TrainLog,
    TrainStepRecord,
    make_streams,
    sample_conditions,
    sample_synthetic,
    train_model,
    train_step,
)

__all__ = [
    "TsganConfig",
    "SeedStreams",
    "derived_seed",
    "TrainingDiverged",
    "sample_latent",
    "interpolate",
    "gradient_penalty",
    "penalty_terms",
    "critic_loss_stage1",
    "critic_loss_stage2",
    "generator_loss_stage1",
    "generator_loss_stage2",
    "TsganModel",
    "build_tsgan_model",
    "build_baseline_model",
    "output_scale_for",
    "SPEC_GENERATOR",
    "SERIES_GENERATOR",
    "SPEC_CRITIC",
    "SERIES_CRITIC",
    "TrainLog",
    "TrainStepRecord",
    "train_step",
    "train_model",
    "make_streams",
    "sample_synthetic",
    "sample_conditions",
]
