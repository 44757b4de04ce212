"""Command-line client for the experiment service.

By default commands run against an embedded in-process copy of the service
(no server needed); pass --server URL to target a running instance started
with `tsgan serve`.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def _abs(path: str | None) -> str | None:
    """Requests carry server-side filesystem paths; send them absolute so a
    remote service (different cwd) resolves them the same way."""
    return None if path is None else str(Path(path).absolute())


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server.rstrip("/"), timeout=None)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(args, endpoint: str, payload: dict) -> dict:
    with _client(args.server) as client:
        resp = client.post(endpoint, json=payload)
        body = resp.json()
        if resp.status_code != 200:
            detail = body.get("detail", body) if isinstance(body, dict) else body
            print(f"error: {detail}", file=sys.stderr)
            raise SystemExit(1)
        return body


def _dataset_pair(args) -> dict[str, str]:
    """Resolve --dataset PREFIX (or explicit --train-file/--test-file) into
    config overrides."""
    overrides: dict[str, str] = {}
    if args.train_file and args.test_file:
        overrides["dataset.train"] = _abs(args.train_file)
        overrides["dataset.test"] = _abs(args.test_file)
        return overrides
    if not args.dataset:
        return overrides
    prefix = args.dataset
    candidates = []
    for ext in (".tsv", ".txt", ".csv", ".tsv.gz", ".txt.gz", ".csv.gz", ""):
        train = Path(f"{prefix}_TRAIN{ext}")
        test = Path(f"{prefix}_TEST{ext}")
        candidates.append((train, test))
    for train, test in candidates:
        if train.exists() and test.exists():
            overrides["dataset.train"] = str(train.absolute())
            overrides["dataset.test"] = str(test.absolute())
            return overrides
    print(
        f"error: no {prefix}_TRAIN.* / {prefix}_TEST.* pair found "
        "(or pass --train-file/--test-file)",
        file=sys.stderr,
    )
    raise SystemExit(1)


def _common_overrides(args) -> dict[str, str]:
    overrides = _dataset_pair(args)
    if getattr(args, "model", None):
        overrides["model"] = args.model
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = str(args.seed)
    if getattr(args, "epochs", None) is not None:
        overrides["gan.epochs"] = str(args.epochs)
    if getattr(args, "steps", None) is not None:
        overrides["steps"] = str(args.steps)
    if getattr(args, "out", None):
        overrides["out"] = _abs(args.out)
    for item in getattr(args, "set", []) or []:
        if "=" not in item:
            print(f"error: --set expects key=value, got '{item}'", file=sys.stderr)
            raise SystemExit(1)
        key, value = item.split("=", 1)
        overrides[key] = value
    return overrides


def cmd_train(args) -> None:
    payload = {
        "config_path": _abs(args.config),
        "overrides": _common_overrides(args),
        "resume": args.resume,
    }
    body = _post(args, "/train", payload)
    print(f"status: {body['status']}")
    print(f"dataset: {body['dataset']} ({body['classes']} classes)")
    print(f"manifest: {body['manifest_path']}")
    print(f"wall seconds: {body['wall_seconds']:.1f}")
    if body["status"] != "complete":
        raise SystemExit(1)


def cmd_generate(args) -> None:
    payload = {
        "manifest_path": _abs(args.manifest),
        "n_per_class": args.n,
        "dump_conditions": args.dump_conditions,
    }
    body = _post(args, "/generate", payload)
    for path in body["sample_files"]:
        print(path)


def cmd_evaluate(args) -> None:
    payload = {
        "manifest_path": _abs(args.manifest),
        "baseline_manifest_path": _abs(args.baseline),
        "eval_epochs": args.eval_epochs,
        "with_plots": args.with_plots,
    }
    body = _post(args, "/evaluate", payload)
    print(f"dataset: {body['dataset']}")
    headers = ["dataset", "wgan_trts", "tsgan_trts", "wgan_tstr", "tsgan_tstr", "trtr"]
    print("  ".join(headers))
    print("  ".join(body["table_row"]))
    for key in ("tsgan_fid", "wgan_fid"):
        if body.get(key) is not None:
            print(f"{key}: {body[key]:.4f}")
    print(f"metrics: {body['metrics_dir']}")


def cmd_plot(args) -> None:
    payload = {"manifest_path": _abs(args.manifest), "baseline_manifest_path": _abs(args.baseline)}
    body = _post(args, "/plot", payload)
    for path in body["plot_files"]:
        print(path)


def cmd_batch(args) -> None:
    payload = {
        "batch_file": _abs(args.batch_file),
        "out_dir": _abs(args.out or "batch-runs"),
        "overrides": _common_overrides(args),
        "config_path": _abs(args.config),
        "workers": args.workers,
        "resume": args.resume,
    }
    body = _post(args, "/batch", payload)
    print(f"datasets evaluated: {body['datasets']}")
    print(f"report: {body['report']}")
    print(json.dumps(body["counts"], indent=2))


def cmd_serve(args) -> None:
    import uvicorn

    uvicorn.run("tsgan.service:app", host=args.host, port=args.port, log_level="info")


def cmd_toy(args) -> None:
    from .datasets import make_sine_square_dataset, write_ucr_file

    ds = make_sine_square_dataset(
        args.train_per_class, args.test_per_class, length=args.length, seed=args.seed or 0
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tr_l, tr_v = ds.train_split()
    te_l, te_v = ds.test_split()
    write_ucr_file(out / "toy-sine-square_TRAIN.tsv", tr_l, tr_v)
    write_ucr_file(out / "toy-sine-square_TEST.tsv", te_l, te_v)
    print(out / "toy-sine-square_TRAIN.tsv")
    print(out / "toy-sine-square_TEST.tsv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsgan",
        description="Two-stage time-series GAN: train, sample, evaluate, plot.",
    )
    parser.add_argument("--server", default=None, help="URL of a running service (default: embedded)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_dataset_flags(p):
        p.add_argument("--config", default=None, help="key=value config file")
        p.add_argument("--dataset", default=None, help="dataset prefix (expects PREFIX_TRAIN.* and PREFIX_TEST.*)")
        p.add_argument("--train-file", default=None)
        p.add_argument("--test-file", default=None)
        p.add_argument("--model", choices=["tsgan", "wgan-baseline"], default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--epochs", type=int, default=None, help="training epochs over each class")
        p.add_argument("--steps", type=int, default=None, help="exact optimization steps per class")
        p.add_argument("--out", default=None, help="output directory for runs")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="extra config override")

    p = sub.add_parser("train", help="train one model per class")
    add_dataset_flags(p)
    p.add_argument("--resume", action="store_true", help="continue from the last checkpoint")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("generate", help="sample synthetic series from a trained run")
    p.add_argument("--manifest", required=True, help="run manifest (or run directory)")
    p.add_argument("-n", type=int, default=None, help="samples per class")
    p.add_argument("--dump-conditions", action="store_true", help="also save conditioning spectrograms")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="FID + TSTR/TRTS/TRTR metrics for a run")
    p.add_argument("--manifest", required=True)
    p.add_argument("--baseline", default=None, help="baseline run manifest for comparison columns")
    p.add_argument("--eval-epochs", type=int, default=None)
    p.add_argument("--with-plots", action="store_true", help="also write the figure panels")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("plot", help="three-row sample panels per class")
    p.add_argument("--manifest", required=True)
    p.add_argument("--baseline", default=None)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("batch", help="full pipeline over a list of datasets")
    add_dataset_flags(p)
    p.add_argument("batch_file", help="text file with one 'train_path test_path' per line")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("toy", help="write the two-class sine/square toy dataset")
    p.add_argument("--out", default="toy-data")
    p.add_argument("--train-per-class", type=int, default=30)
    p.add_argument("--test-per-class", type=int, default=30)
    p.add_argument("--length", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_toy)

    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
