"""Experiment configuration and run manifests as flat key=value text.

Both files are diff-able, order-independent on read and canonically sorted
on write.  Manifest paths are stored relative to the manifest's directory so
run folders can be moved wholesale.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..gan.config import TsganConfig
from ..spectrogram import StftConfig

MODEL_KINDS = ("tsgan", "wgan-baseline")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    train_path: str
    test_path: str
    model: str = "tsgan"
    seed: int = 0
    out_dir: str = "runs"
    dataset_name: str | None = None
    steps: int | None = None  # overrides gan.epochs-derived step count
    eval_epochs: int = 200
    n_synthetic_per_class: int | None = None  # default: max split size per class
    checkpoint_every: int = 100
    gan: TsganConfig = field(default_factory=TsganConfig)

    def __post_init__(self):
        if self.model not in MODEL_KINDS:
            raise ConfigError(f"model must be one of {MODEL_KINDS}, got '{self.model}'")
        if self.gan.seed != self.seed:
            object.__setattr__(self, "gan", replace(self.gan, seed=self.seed))

    def validate_paths(self) -> None:
        for p in (self.train_path, self.test_path):
            if not Path(p).exists():
                raise ConfigError(f"dataset file not found: {p}")

    def run_name(self) -> str:
        name = self.dataset_name or _infer_name(self.train_path)
        return f"{name}-{self.model}-seed{self.seed}"

    def run_dir(self) -> Path:
        return Path(self.out_dir) / self.run_name()

    def to_pairs(self) -> dict[str, str]:
        g = self.gan
        s = g.stft
        pairs = {
            "dataset.train": str(self.train_path),
            "dataset.test": str(self.test_path),
            "model": self.model,
            "seed": str(self.seed),
            "out": str(self.out_dir),
            "eval_epochs": str(self.eval_epochs),
            "checkpoint_every": str(self.checkpoint_every),
            "gan.z_dim": str(g.z_dim),
            "gan.gp_lambda": repr(g.gp_lambda),
            "gan.n_critic": str(g.n_critic),
            "gan.batch_size": str(g.batch_size),
            "gan.epochs": str(g.epochs),
            "gan.noise_stddev": repr(g.noise_stddev),
            "gan.g_channels": str(g.g_channels),
            "gan.f_channels": str(g.f_channels),
            "gan.dx_channels": str(g.dx_channels),
            "gan.dy_channels": str(g.dy_channels),
            "gan.synthetic_condition_fraction": repr(g.synthetic_condition_fraction),
            "gan.sequential_stages": str(int(g.sequential_stages)),
            "stft.window": str(s.window_length),
            "stft.hop": str(s.hop),
            "stft.fft_size": str(s.fft_size),
            "stft.floor_db": repr(s.log_floor_db),
        }
        if self.dataset_name:
            pairs["dataset.name"] = self.dataset_name
        if self.steps is not None:
            pairs["steps"] = str(self.steps)
        if self.n_synthetic_per_class is not None:
            pairs["n_synthetic_per_class"] = str(self.n_synthetic_per_class)
        if g.clip_bound is not None:
            pairs["gan.clip_bound"] = repr(g.clip_bound)
        return pairs

    def input_hash(self) -> str:
        """Content hash over both dataset files and the canonical config
        (excluding the output location)."""
        h = hashlib.sha256()
        for p in (self.train_path, self.test_path):
            path = Path(p)
            if path.exists():
                h.update(path.read_bytes())
        for k, v in sorted(self.to_pairs().items()):
            if k == "out":
                continue
            h.update(f"{k}={v}\n".encode())
        return h.hexdigest()


def _infer_name(train_path) -> str:
    stem = Path(train_path).name
    for suffix in (".gz", ".tsv", ".txt", ".csv"):
        stem = stem.removesuffix(suffix)
    return stem.removesuffix("_TRAIN")


def write_pairs(path, pairs: dict[str, str]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = "".join(f"{k}={pairs[k]}\n" for k in sorted(pairs))
    path.write_text(body)


def read_pairs(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: malformed line '{line}'")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def config_from_pairs(pairs: dict[str, str]) -> ExperimentConfig:
    def get(key, default=None):
        return pairs.get(key, default)

    try:
        stft = StftConfig(
            window_length=int(get("stft.window", 32)),
            hop=int(get("stft.hop", 8)),
            fft_size=int(get("stft.fft_size", 64)),
            log_floor_db=float(get("stft.floor_db", -80.0)),
        )
        gan = TsganConfig(
            z_dim=int(get("gan.z_dim", 100)),
            gp_lambda=float(get("gan.gp_lambda", 10.0)),
            n_critic=int(get("gan.n_critic", 5)),
            batch_size=int(get("gan.batch_size", 32)),
            epochs=int(get("gan.epochs", 2000)),
            noise_stddev=float(get("gan.noise_stddev", 0.05)),
            seed=int(get("seed", 0)),
            stft=stft,
            g_channels=int(get("gan.g_channels", 128)),
            f_channels=int(get("gan.f_channels", 64)),
            dx_channels=int(get("gan.dx_channels", 32)),
            dy_channels=int(get("gan.dy_channels", 32)),
            synthetic_condition_fraction=float(get("gan.synthetic_condition_fraction", 0.5)),
            clip_bound=float(pairs["gan.clip_bound"]) if "gan.clip_bound" in pairs else None,
            sequential_stages=bool(int(get("gan.sequential_stages", 0))),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(f"bad configuration value: {err}") from None
    if "dataset.train" not in pairs or "dataset.test" not in pairs:
        raise ConfigError("configuration needs dataset.train and dataset.test")
    return ExperimentConfig(
        train_path=pairs["dataset.train"],
        test_path=pairs["dataset.test"],
        model=get("model", "tsgan"),
        seed=int(get("seed", 0)),
        out_dir=get("out", "runs"),
        dataset_name=get("dataset.name"),
        steps=int(pairs["steps"]) if "steps" in pairs else None,
        eval_epochs=int(get("eval_epochs", 200)),
        n_synthetic_per_class=(
            int(pairs["n_synthetic_per_class"]) if "n_synthetic_per_class" in pairs else None
        ),
        checkpoint_every=int(get("checkpoint_every", 100)),
        gan=gan,
    )


def load_config(config_path=None, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Config file plus key=value overrides (overrides win)."""
    pairs: dict[str, str] = {}
    if config_path is not None:
        pairs.update(read_pairs(config_path))
    if overrides:
        pairs.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_pairs(pairs)


@dataclass
class RunManifest:
    """Everything a finished (or aborted) run produced, with relative paths."""

    path: Path  # manifest file location; other paths resolve against its parent
    pairs: dict[str, str] = field(default_factory=dict)

    @property
    def run_dir(self) -> Path:
        return self.path.parent

    @property
    def status(self) -> str:
        return self.pairs.get("status", "unknown")

    @property
    def model(self) -> str:
        return self.pairs.get("model", "tsgan")

    @property
    def classes(self) -> int:
        return int(self.pairs.get("classes", 0))

    def resolve(self, key: str) -> Path:
        if key not in self.pairs:
            raise ConfigError(f"manifest {self.path} has no entry '{key}'")
        return self.run_dir / self.pairs[key]

    def config(self) -> ExperimentConfig:
        return config_from_pairs(self.pairs)

    def set_path(self, key: str, target: Path) -> None:
        self.pairs[key] = str(Path(target).relative_to(self.run_dir))

    def save(self) -> None:
        write_pairs(self.path, self.pairs)


def load_manifest(path) -> RunManifest:
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.txt"
    if not path.exists():
        raise ConfigError(f"manifest not found: {path}")
    return RunManifest(path=path, pairs=read_pairs(path))
