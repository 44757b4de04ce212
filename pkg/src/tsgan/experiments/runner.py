"""Command implementations: train, generate, evaluate, plot, batch.

Every command is a plain function over an ExperimentConfig or RunManifest so
the HTTP service and the CLI share one code path.  All randomness is derived
from the run seed; re-running a command with unchanged inputs rewrites
byte-identical artifacts (wall-clock summary keys aside).
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from ..datasets import SignalDataset, load_dataset, prepare_dataset
from ..evaluation import (
    EvaluationError,
    fid_1d,
    train_fcn,
    trtr,
    trts,
    tstr,
)
from ..evaluation.reports import (
    CLASSIFICATION_COLUMNS,
    COMPARISON_HEADERS,
    FID_COLUMNS,
    classification_record,
    comparison_row,
    fid_record,
    format_table,
    read_records,
    write_records,
)
from ..gan import (
    SeedStreams,
    TrainLog,
    TrainStepRecord,
    TrainingDiverged,
    TsganModel,
    build_baseline_model,
    build_tsgan_model,
    derived_seed,
    make_streams,
    sample_conditions,
    sample_synthetic,
    train_model,
)
from ..nn import load_tensors, save_tensors
from .config import (
    ConfigError,
    ExperimentConfig,
    RunManifest,
    load_manifest,
    read_pairs,
    write_pairs,
)
from .plotting import write_class_panel

logger = logging.getLogger(__name__)

TRAINLOG_COLUMNS = (
    "step",
    "d_loss_spec",
    "d_loss_series",
    "g_loss_spec",
    "g_loss_series",
    "gp_spec",
    "gp_series",
    "grad_norm_spec",
    "grad_norm_series",
)


# ---------------------------------------------------------------------------
# checkpoint plumbing

def _class_dir(run_dir: Path, label: int) -> Path:
    return run_dir / f"class_{label}"


def save_class_checkpoint(
    class_dir: Path, model: TsganModel, streams: SeedStreams, log: TrainLog
) -> None:
    class_dir.mkdir(parents=True, exist_ok=True)
    for name, net in model.nets.items():
        tensors = net.tensors_for_checkpoint()
        tensors.update(
            {f"adam.{k}": v for k, v in model.opts[name].tensors_for_checkpoint().items()}
        )
        save_tensors(class_dir / f"{name}.tsg1", tensors)
    state = {
        "steps_done": str(model.steps_done),
        "signal_length": str(model.signal_length),
        "kind": model.kind,
        "output_scale": repr(model.output_scale),
    }
    for name, opt in model.opts.items():
        state[f"adam.{name}.step"] = str(opt.step)
    for name, payload in streams.state().items():
        state[f"stream.{name}"] = payload
    write_pairs(class_dir / "state.txt", state)
    _write_trainlog(class_dir / "trainlog.tsv", log)


def _write_trainlog(path: Path, log: TrainLog) -> None:
    lines = []
    for r in log.records:
        vals = [str(r.step)] + [
            format(getattr(r, c), ".6f") for c in TRAINLOG_COLUMNS[1:]
        ]
        lines.append("\t".join(vals))
    write_records(path, TRAINLOG_COLUMNS, lines)


def _read_trainlog(path: Path) -> TrainLog:
    log = TrainLog()
    for row in read_records(path):
        rec = TrainStepRecord(step=int(row["step"]))
        for c in TRAINLOG_COLUMNS[1:]:
            setattr(rec, c, float(row[c]))
        log.records.append(rec)
    return log


def load_class_checkpoint(
    class_dir: Path, cfg: ExperimentConfig, signal_length: int
) -> tuple[TsganModel, SeedStreams, TrainLog]:
    state = read_pairs(class_dir / "state.txt")
    kind = state["kind"]
    out_scale = float(state.get("output_scale", 1.0))
    model = (
        build_tsgan_model(cfg.gan, signal_length, out_scale)
        if kind == "tsgan"
        else build_baseline_model(cfg.gan, signal_length, out_scale)
    )
    for name, net in model.nets.items():
        tensors = load_tensors(class_dir / f"{name}.tsg1")
        net.load_tensors({k: v for k, v in tensors.items() if not k.startswith("adam.")})
        model.opts[name].load_tensors(
            {k[5:]: v for k, v in tensors.items() if k.startswith("adam.")}
        )
        model.opts[name].step = int(state[f"adam.{name}.step"])
    model.steps_done = int(state["steps_done"])
    tag = class_dir.name
    streams = make_streams(cfg.gan, kind, (_dataset_tag(cfg), tag))
    streams.load_state(
        {k[len("stream."):]: v for k, v in state.items() if k.startswith("stream.")}
    )
    log = _read_trainlog(class_dir / "trainlog.tsv")
    return model, streams, log


def _dataset_tag(cfg: ExperimentConfig) -> str:
    return cfg.dataset_name or cfg.run_name().split("-")[0]


# ---------------------------------------------------------------------------
# train

def cmd_train(cfg: ExperimentConfig, resume: bool = False) -> RunManifest:
    """Train one model per class and checkpoint everything under the run dir.

    Diverged classes are flagged in the manifest; their last periodic
    checkpoint stays on disk.
    """
    cfg.validate_paths()
    ds = prepare_dataset(load_dataset(cfg.train_path, cfg.test_path, cfg.dataset_name), cfg.gan.stft.hop)
    from dataclasses import replace

    cfg = replace(cfg, dataset_name=ds.name)  # pin the name so hashes round-trip
    run_dir = cfg.run_dir()
    run_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(path=run_dir / "manifest.txt", pairs=dict(cfg.to_pairs()))
    manifest.pairs.update(
        {
            "dataset.size": str(len(ds)),
            "dataset.category": ds.size_category,
            "dataset.signal_length": str(ds.signal_length),
            "dataset.n_train": str(ds.n_train),
            "classes": str(ds.class_count),
            "input_hash": cfg.input_hash(),
            "status": "complete",
        }
    )
    start = time.perf_counter()
    for label in range(ds.class_count):
        values = ds.class_values(label)
        class_dir = _class_dir(run_dir, label)
        target_steps = cfg.steps
        if target_steps is None:
            m = min(cfg.gan.batch_size, len(values))
            target_steps = cfg.gan.epochs * math.ceil(len(values) / m)
        model = streams = log = None
        if resume and (class_dir / "state.txt").exists():
            model, streams, log = load_class_checkpoint(class_dir, cfg, ds.signal_length)
            logger.info("resuming class %d from step %d", label, model.steps_done)

        def checkpoint(mdl, strm, lg, _dir=class_dir):
            save_class_checkpoint(_dir, mdl, strm, lg)

        try:
            model, streams, log = train_model(
                values,
                cfg.gan,
                cfg.model,
                steps=target_steps,
                tags=(_dataset_tag(cfg), f"class_{label}"),
                model=model,
                streams=streams,
                log=log,
                checkpoint_every=cfg.checkpoint_every,
                on_checkpoint=checkpoint,
            )
        except TrainingDiverged as err:
            manifest.pairs["status"] = "aborted"
            manifest.pairs[f"class_{label}.aborted_at_step"] = str(
                getattr(getattr(err, "record", None), "step", -1)
            )
            logger.error("class %d diverged: %s", label, err)
            continue
        save_class_checkpoint(class_dir, model, streams, log)
        manifest.pairs[f"class_{label}.steps"] = str(model.steps_done)
        for net_name in model.nets:
            manifest.pairs[f"class_{label}.checkpoint.{net_name}"] = f"class_{label}/{net_name}.tsg1"
        manifest.pairs[f"class_{label}.state"] = f"class_{label}/state.txt"
        manifest.pairs[f"class_{label}.trainlog"] = f"class_{label}/trainlog.tsv"
        manifest.pairs[f"class_{label}.terminal_grad_norm"] = format(
            log.terminal_grad_norm(), ".6f"
        )
    manifest.pairs["wall_seconds.train"] = format(time.perf_counter() - start, ".3f")
    manifest.save()
    return manifest


# ---------------------------------------------------------------------------
# generate

def _sample_header(model: str, label: int, n: int) -> str:
    return f"# synthetic samples\tmodel={model}\tclass={label}\tn={n}"


def read_sample_file(path: Path) -> np.ndarray:
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        rows.append([float(v) for v in fields[1:]])
    if not rows:
        return np.zeros((0, 0), dtype=np.float32)
    return np.asarray(rows, dtype=np.float32)


def cmd_generate(
    manifest: RunManifest,
    n_per_class: int | None = None,
    dump_conditions: bool = False,
) -> RunManifest:
    """Sample synthetic series per class into the dataset text format."""
    cfg = manifest.config()
    ds = prepare_dataset(load_dataset(cfg.train_path, cfg.test_path, cfg.dataset_name), cfg.gan.stft.hop)
    samples_dir = manifest.run_dir / "samples"
    samples_dir.mkdir(parents=True, exist_ok=True)
    train_labels, _ = ds.train_split()
    test_labels, _ = ds.test_split()
    for label in range(ds.class_count):
        class_dir = _class_dir(manifest.run_dir, label)
        if not (class_dir / "state.txt").exists():
            raise ConfigError(f"no checkpoint for class {label} under {manifest.run_dir}")
        model, _, _ = load_class_checkpoint(class_dir, cfg, ds.signal_length)
        n = n_per_class
        if n is None:
            n = cfg.n_synthetic_per_class
        if n is None:
            n = int((train_labels == label).sum() + (test_labels == label).sum())
        series = sample_synthetic(model, n, seed=derived_seed(cfg.seed, "generate", f"class_{label}"))
        out_path = samples_dir / f"class_{label}.tsv"
        lines = [_sample_header(cfg.model, label, n)]
        for row in series:
            lines.append("\t".join([str(label)] + [repr(float(v)) for v in row]))
        out_path.write_text("".join(ln + "\n" for ln in lines))
        manifest.pairs[f"samples.class_{label}"] = f"samples/class_{label}.tsv"
        if dump_conditions and model.kind == "tsgan":
            conds = sample_conditions(
                model, n, seed=derived_seed(cfg.seed, "generate", f"class_{label}")
            )
            cond_path = samples_dir / f"class_{label}_conditions.npy"
            np.save(cond_path, conds)
            manifest.pairs[f"conditions.class_{label}"] = f"samples/class_{label}_conditions.npy"
    manifest.save()
    return manifest


def _load_sample_pools(manifest: RunManifest, ds: SignalDataset) -> dict[int, np.ndarray]:
    pools = {}
    for label in range(ds.class_count):
        key = f"samples.class_{label}"
        if key not in manifest.pairs:
            raise EvaluationError(
                f"run {manifest.run_dir} has no samples for class {label}; run generate first"
            )
        arr = read_sample_file(manifest.resolve(key))
        if arr.size and arr.shape[1] != ds.signal_length:
            raise EvaluationError(
                f"sample length {arr.shape[1]} != dataset length {ds.signal_length}"
            )
        pools[label] = arr
    return pools


# ---------------------------------------------------------------------------
# evaluate

def _split_pool(
    pools: dict[int, np.ndarray], labels_train, labels_test, n_classes: int
) -> tuple[dict[int, np.ndarray], dict[int, np.ndarray]]:
    """Disjoint synthetic pools for TSTR (train-sized) and TRTS (test-sized)."""
    tstr_pool, trts_pool = {}, {}
    for c in range(n_classes):
        need_train = int((labels_train == c).sum())
        need_test = int((labels_test == c).sum())
        have = len(pools.get(c, ()))
        if have < need_train + need_test:
            raise EvaluationError(
                f"class {c}: {have} synthetic series on disk, protocols need "
                f"{need_train}+{need_test}; re-run generate with a larger count"
            )
        tstr_pool[c] = pools[c][:need_train]
        trts_pool[c] = pools[c][need_train : need_train + need_test]
    return tstr_pool, trts_pool


def cmd_evaluate(
    manifest: RunManifest,
    baseline_manifest: RunManifest | None = None,
    with_plots: bool = False,
    eval_epochs: int | None = None,
) -> dict:
    """Compute FID and TSTR/TRTS/TRTR, write metric records plus the
    six-column comparison row (and optionally the figure panels)."""
    cfg = manifest.config()
    epochs = eval_epochs if eval_epochs is not None else cfg.eval_epochs
    ds = prepare_dataset(load_dataset(cfg.train_path, cfg.test_path, cfg.dataset_name), cfg.gan.stft.hop)
    pools = _load_sample_pools(manifest, ds)
    train_labels, train_values = ds.train_split()
    test_labels, _ = ds.test_split()

    baseline_pools = None
    if baseline_manifest is not None:
        baseline_pools = _load_sample_pools(baseline_manifest, ds)

    fid_fcn = train_fcn(
        train_labels, train_values, epochs=epochs, seed=derived_seed(cfg.seed, "eval", "fid-fcn")
    )
    proto_seed = derived_seed(cfg.seed, "eval", "protocol-fcn")

    def evaluate_model(model_name: str, model_pools: dict[int, np.ndarray]) -> dict:
        synth_all = np.concatenate([model_pools[c] for c in sorted(model_pools)], axis=0)
        fid = fid_1d(fid_fcn, ds.values, synth_all, dataset=ds.name, model=model_name)
        tstr_pool, trts_pool = _split_pool(model_pools, train_labels, test_labels, ds.class_count)
        r_tstr = tstr(ds, tstr_pool, epochs=epochs, seed=proto_seed)
        r_trts = trts(ds, trts_pool, epochs=epochs, seed=proto_seed)
        return {"fid": fid, "tstr": r_tstr, "trts": r_trts}

    results = {"tsgan" if cfg.model == "tsgan" else "wgan": evaluate_model(cfg.model, pools)}
    if baseline_pools is not None:
        base_cfg = baseline_manifest.config()
        results["wgan"] = evaluate_model(base_cfg.model, baseline_pools)
    r_trtr = trtr(ds, epochs=epochs, seed=proto_seed)

    metrics_dir = manifest.run_dir / "metrics"
    metrics_dir.mkdir(parents=True, exist_ok=True)
    fid_lines = [fid_record(res["fid"]) for res in results.values()]
    write_records(metrics_dir / "fid.tsv", FID_COLUMNS, fid_lines)
    cls_lines = []
    for name, res in results.items():
        cls_lines.append(classification_record(res["tstr"], ds.name, name))
        cls_lines.append(classification_record(res["trts"], ds.name, name))
    cls_lines.append(classification_record(r_trtr, ds.name, "real"))
    write_records(metrics_dir / "classification.tsv", CLASSIFICATION_COLUMNS, cls_lines)

    tsgan_res = results.get("tsgan")
    wgan_res = results.get("wgan")
    row = comparison_row(
        ds.name,
        wgan_res["trts"].accuracy if wgan_res else None,
        tsgan_res["trts"].accuracy if tsgan_res else None,
        wgan_res["tstr"].accuracy if wgan_res else None,
        tsgan_res["tstr"].accuracy if tsgan_res else None,
        r_trtr.accuracy,
    )
    write_records(metrics_dir / "table_row.tsv", tuple(COMPARISON_HEADERS), ["\t".join(row)])
    (metrics_dir / "table.txt").write_text(format_table(COMPARISON_HEADERS, [row]))

    for key, rel in (
        ("metrics.fid", "metrics/fid.tsv"),
        ("metrics.classification", "metrics/classification.tsv"),
        ("metrics.table_row", "metrics/table_row.tsv"),
        ("metrics.table", "metrics/table.txt"),
    ):
        manifest.pairs[key] = rel
    manifest.save()

    if with_plots:
        cmd_plot(manifest, baseline_manifest)

    out = {
        "dataset": ds.name,
        "trtr_accuracy": r_trtr.accuracy,
        "table_row": row,
        "metrics_dir": str(metrics_dir),
    }
    for name, res in results.items():
        out[f"{name}_fid"] = res["fid"].fid
        out[f"{name}_tstr"] = res["tstr"].accuracy
        out[f"{name}_trts"] = res["trts"].accuracy
    return out


# ---------------------------------------------------------------------------
# plot

def cmd_plot(manifest: RunManifest, baseline_manifest: RunManifest | None = None) -> list[Path]:
    """Three-row panel per class: baseline / primary model / real."""
    cfg = manifest.config()
    ds = prepare_dataset(load_dataset(cfg.train_path, cfg.test_path, cfg.dataset_name), cfg.gan.stft.hop)
    pools = _load_sample_pools(manifest, ds)
    baseline_pools = None
    if baseline_manifest is not None:
        baseline_pools = _load_sample_pools(baseline_manifest, ds)
    plots_dir = manifest.run_dir / "plots"
    written = []
    for label in range(ds.class_count):
        path = plots_dir / f"class_{label}.svg"
        write_class_panel(
            path,
            baseline_pools[label] if baseline_pools else None,
            pools[label],
            ds.class_values(label),
        )
        manifest.pairs[f"plots.class_{label}"] = f"plots/class_{label}.svg"
        written.append(path)
    manifest.save()
    return written


# ---------------------------------------------------------------------------
# batch

def _run_single_dataset(args) -> dict:
    train_path, test_path, base_pairs, resume = args
    from .config import config_from_pairs  # re-import for process pools

    results = {}
    manifests = {}
    for model in ("wgan-baseline", "tsgan"):
        pairs = dict(base_pairs)
        pairs["dataset.train"] = train_path
        pairs["dataset.test"] = test_path
        pairs["model"] = model
        cfg = config_from_pairs(pairs)
        manifest = cmd_train(cfg, resume=resume)
        if manifest.status == "aborted":
            results[model] = "aborted"
            manifests[model] = manifest
            continue
        cmd_generate(manifest)
        manifests[model] = manifest
        results[model] = "ok"
    if results.get("tsgan") == "ok":
        summary = cmd_evaluate(
            manifests["tsgan"],
            manifests.get("wgan-baseline") if results.get("wgan-baseline") == "ok" else None,
            with_plots=True,
        )
        results["evaluation"] = summary
        results["manifest"] = str(manifests["tsgan"].path)
        results["category"] = manifests["tsgan"].pairs.get("dataset.category", "small")
        results["dataset"] = manifests["tsgan"].pairs.get("dataset.name", train_path)
    return results


def cmd_batch(
    batch_file,
    base_pairs: dict[str, str],
    out_dir: str,
    workers: int = 1,
    resume: bool = False,
) -> dict:
    """Run the full pipeline over a list of datasets and aggregate wins.

    The batch file holds one dataset per line: `train_path test_path`.
    """
    entries = []
    for line in Path(batch_file).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ConfigError(f"batch line needs 'train_path test_path': '{line}'")
        entries.append((parts[0], parts[1]))
    if not entries:
        raise ConfigError(f"batch file {batch_file} lists no datasets")

    base_pairs = dict(base_pairs)
    base_pairs["out"] = out_dir
    args = [(tr, te, base_pairs, resume) for tr, te in entries]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            all_results = list(pool.map(_run_single_dataset, args))
    else:
        all_results = [_run_single_dataset(a) for a in args]

    return aggregate_batch(all_results, Path(out_dir))


def aggregate_batch(all_results: list[dict], out_dir: Path) -> dict:
    """Win/tie/loss counts per metric, grouped by dataset size category."""
    metrics = ("fid", "trts", "tstr")
    counts = {
        cat: {m: {"win": 0, "tie": 0, "loss": 0} for m in metrics}
        for cat in ("small", "medium", "large")
    }
    rows = []
    completed = 0
    for res in all_results:
        summary = res.get("evaluation")
        if not summary:
            continue
        completed += 1
        cat = res.get("category", "small")
        have_baseline = "wgan_fid" in summary
        for metric in metrics:
            ours = summary.get(f"tsgan_{metric}")
            theirs = summary.get(f"wgan_{metric}")
            if ours is None or theirs is None:
                continue
            if metric == "fid":
                outcome = "win" if ours < theirs else ("tie" if ours == theirs else "loss")
            else:
                outcome = "win" if ours > theirs else ("tie" if ours == theirs else "loss")
            counts[cat][metric][outcome] += 1
        rows.append(
            [
                summary["dataset"],
                cat,
                _num(summary.get("wgan_trts")),
                _num(summary.get("tsgan_trts")),
                _num(summary.get("wgan_tstr")),
                _num(summary.get("tsgan_tstr")),
                _num(summary.get("trtr_accuracy")),
                _num(summary.get("wgan_fid")),
                _num(summary.get("tsgan_fid")),
            ]
        )

    out_dir.mkdir(parents=True, exist_ok=True)
    headers = ["dataset", "category"] + COMPARISON_HEADERS[1:] + ["wgan_fid", "tsgan_fid"]
    write_records(out_dir / "batch_records.tsv", tuple(headers), ["\t".join(r) for r in rows])
    report_lines = [format_table(headers, rows)]
    for cat in ("small", "medium", "large"):
        for metric in metrics:
            c = counts[cat][metric]
            total = c["win"] + c["tie"] + c["loss"]
            if total:
                report_lines.append(
                    f"{cat} {metric}: tsgan wins {c['win']}, ties {c['tie']}, losses {c['loss']} of {total}"
                )
    (out_dir / "batch_report.txt").write_text("\n".join(report_lines) + "\n")
    return {
        "datasets": completed,
        "counts": counts,
        "records": str(out_dir / "batch_records.tsv"),
        "report": str(out_dir / "batch_report.txt"),
    }


def _num(v) -> str:
    return "-" if v is None else format(float(v), ".2f")
