"""CLI thin client driving the embedded service end to end."""
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from tsgan.cli import main

from helpers import tiny_overrides


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    main(
        [
            "toy",
            "--out",
            str(root / "data"),
            "--train-per-class",
            "8",
            "--test-per-class",
            "6",
            "--length",
            "64",
        ]
    )
    assert (root / "data" / "toy-sine-square_TRAIN.tsv").exists()
    return root


def _flags(root, extra=()):
    overrides = tiny_overrides(
        root / "data" / "toy-sine-square_TRAIN.tsv",
        root / "data" / "toy-sine-square_TEST.tsv",
        root / "runs",
    )
    dataset_prefix = str(root / "data" / "toy-sine-square")
    flags = ["--dataset", dataset_prefix, "--out", str(root / "runs"), "--seed", "7", "--steps", "3"]
    for key in (
        "gan.batch_size",
        "gan.n_critic",
        "gan.g_channels",
        "gan.f_channels",
        "gan.dx_channels",
        "gan.dy_channels",
        "stft.window",
        "stft.hop",
        "stft.fft_size",
        "eval_epochs",
        "checkpoint_every",
    ):
        flags += ["--set", f"{key}={overrides[key]}"]
    return flags + list(extra)


def test_cli_pipeline(workspace, capsys):
    root = workspace
    main(["train"] + _flags(root))
    out = capsys.readouterr().out
    assert "status: complete" in out
    manifest = str(root / "runs" / "toy-sine-square-tsgan-seed7" / "manifest.txt")

    main(["train"] + _flags(root, ["--model", "wgan-baseline"]))
    capsys.readouterr()
    baseline = str(root / "runs" / "toy-sine-square-wgan-baseline-seed7" / "manifest.txt")

    main(["generate", "--manifest", manifest])
    main(["generate", "--manifest", baseline])
    out = capsys.readouterr().out
    assert "class_0.tsv" in out

    main(["evaluate", "--manifest", manifest, "--baseline", baseline, "--with-plots"])
    out = capsys.readouterr().out
    assert "tsgan_fid" in out
    assert "wgan_trts" in out

    main(["plot", "--manifest", manifest, "--baseline", baseline])
    out = capsys.readouterr().out
    svgs = [line for line in out.splitlines() if line.endswith(".svg")]
    assert len(svgs) == 2
    for svg in svgs:
        ET.parse(svg)  # valid XML


def test_cli_rejects_bad_dataset_prefix(workspace, capsys):
    with pytest.raises(SystemExit):
        main(["train", "--dataset", str(workspace / "missing")])
    assert "no" in capsys.readouterr().err


def test_cli_propagates_service_errors(workspace, capsys):
    with pytest.raises(SystemExit):
        main(["generate", "--manifest", "/nonexistent/manifest.txt"])
    err = capsys.readouterr().err
    assert "error" in err
