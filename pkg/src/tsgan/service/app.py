"""FastAPI service exposing the experiment pipeline.

Each endpoint wraps one command from tsgan.experiments.runner; requests run
synchronously in the worker (training a dataset takes minutes, so front this
with a long client timeout or run it embedded via the CLI).
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..datasets import DatasetError
from ..evaluation import EvaluationError
from ..experiments import (
    ConfigError,
    cmd_batch,
    cmd_evaluate,
    cmd_generate,
    cmd_plot,
    cmd_train,
    load_config,
    load_manifest,
)
from ..gan import TrainingDiverged
from . import schemas

app = FastAPI(
    title="tsgan experiment service",
    description="Train, sample and evaluate time-series GANs on UCR-format datasets.",
    version=__version__,
)

_CLIENT_ERRORS = (ConfigError, DatasetError, EvaluationError, ValueError)


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/train", response_model=schemas.TrainResponse)
def train(req: schemas.TrainRequest) -> schemas.TrainResponse:
    try:
        cfg = load_config(req.config_path, req.overrides)
        manifest = cmd_train(cfg, resume=req.resume)
    except TrainingDiverged as err:
        raise HTTPException(status_code=500, detail=f"training diverged: {err}")
    except _CLIENT_ERRORS as err:
        raise HTTPException(status_code=400, detail=str(err))
    return schemas.TrainResponse(
        manifest_path=str(manifest.path),
        run_dir=str(manifest.run_dir),
        status=manifest.status,
        classes=manifest.classes,
        dataset=manifest.pairs.get("dataset.name", ""),
        wall_seconds=float(manifest.pairs.get("wall_seconds.train", 0.0)),
    )


@app.post("/generate", response_model=schemas.GenerateResponse)
def generate(req: schemas.GenerateRequest) -> schemas.GenerateResponse:
    try:
        manifest = load_manifest(req.manifest_path)
        manifest = cmd_generate(manifest, req.n_per_class, req.dump_conditions)
    except _CLIENT_ERRORS as err:
        raise HTTPException(status_code=400, detail=str(err))
    files = [
        str(manifest.resolve(k)) for k in sorted(manifest.pairs) if k.startswith("samples.")
    ]
    return schemas.GenerateResponse(manifest_path=str(manifest.path), sample_files=files)


@app.post("/evaluate", response_model=schemas.EvaluateResponse)
def evaluate(req: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
    try:
        manifest = load_manifest(req.manifest_path)
        baseline = load_manifest(req.baseline_manifest_path) if req.baseline_manifest_path else None
        summary = cmd_evaluate(
            manifest, baseline, with_plots=req.with_plots, eval_epochs=req.eval_epochs
        )
    except _CLIENT_ERRORS as err:
        raise HTTPException(status_code=400, detail=str(err))
    return schemas.EvaluateResponse(
        dataset=summary["dataset"],
        metrics_dir=summary["metrics_dir"],
        table_row=summary["table_row"],
        tsgan_fid=summary.get("tsgan_fid"),
        wgan_fid=summary.get("wgan_fid"),
        tsgan_tstr=summary.get("tsgan_tstr"),
        wgan_tstr=summary.get("wgan_tstr"),
        tsgan_trts=summary.get("tsgan_trts"),
        wgan_trts=summary.get("wgan_trts"),
        trtr_accuracy=summary["trtr_accuracy"],
    )


@app.post("/plot", response_model=schemas.PlotResponse)
def plot(req: schemas.PlotRequest) -> schemas.PlotResponse:
    try:
        manifest = load_manifest(req.manifest_path)
        baseline = load_manifest(req.baseline_manifest_path) if req.baseline_manifest_path else None
        written = cmd_plot(manifest, baseline)
    except _CLIENT_ERRORS as err:
        raise HTTPException(status_code=400, detail=str(err))
    return schemas.PlotResponse(plot_files=[str(p) for p in written])


@app.post("/batch", response_model=schemas.BatchResponse)
def batch(req: schemas.BatchRequest) -> schemas.BatchResponse:
    try:
        pairs = {}
        if req.config_path:
            from ..experiments import read_pairs

            pairs.update(read_pairs(req.config_path))
        pairs.update(req.overrides)
        summary = cmd_batch(
            req.batch_file, pairs, req.out_dir, workers=req.workers, resume=req.resume
        )
    except _CLIENT_ERRORS as err:
        raise HTTPException(status_code=400, detail=str(err))
    return schemas.BatchResponse(
        datasets=summary["datasets"],
        report=summary["report"],
        records=summary["records"],
        counts=summary["counts"],
    )
