"""Request/response models for the experiment service.

Paths in requests refer to the service host's filesystem; this is a
local-first job service, not a data-upload API.
"""
from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class TrainRequest(BaseModel):
    config_path: Optional[str] = Field(default=None, description="key=value config file")
    overrides: dict[str, str] = Field(default_factory=dict, description="config overrides")
    resume: bool = False


class TrainResponse(BaseModel):
    manifest_path: str
    run_dir: str
    status: str
    classes: int
    dataset: str
    wall_seconds: float


class GenerateRequest(BaseModel):
    manifest_path: str
    n_per_class: Optional[int] = None
    dump_conditions: bool = False


class GenerateResponse(BaseModel):
    manifest_path: str
    sample_files: list[str]


class EvaluateRequest(BaseModel):
    manifest_path: str
    baseline_manifest_path: Optional[str] = None
    eval_epochs: Optional[int] = None
    with_plots: bool = False


class EvaluateResponse(BaseModel):
    dataset: str
    metrics_dir: str
    table_row: list[str]
    tsgan_fid: Optional[float] = None
    wgan_fid: Optional[float] = None
    tsgan_tstr: Optional[float] = None
    wgan_tstr: Optional[float] = None
    tsgan_trts: Optional[float] = None
    wgan_trts: Optional[float] = None
    trtr_accuracy: float


class PlotRequest(BaseModel):
    manifest_path: str
    baseline_manifest_path: Optional[str] = None


class PlotResponse(BaseModel):
    plot_files: list[str]


class BatchRequest(BaseModel):
    batch_file: str
    out_dir: str
    overrides: dict[str, str] = Field(default_factory=dict)
    config_path: Optional[str] = None
    workers: int = 1
    resume: bool = False


class BatchResponse(BaseModel):
    datasets: int
    report: str
    records: str
    counts: dict


class HealthResponse(BaseModel):
    status: str
    version: str
