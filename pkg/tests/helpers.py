"""Shared fixtures' building blocks: toy dataset files and a fast config."""
from tsgan.datasets import make_sine_square_dataset, write_ucr_file

TINY_STEPS = 3


def write_toy_files(root, n_train=8, n_test=6, length=64, seed=0):
    ds = make_sine_square_dataset(n_train, n_test, length=length, seed=seed)
    tr_l, tr_v = ds.train_split()
    te_l, te_v = ds.test_split()
    write_ucr_file(root / "toy_TRAIN.tsv", tr_l, tr_v)
    write_ucr_file(root / "toy_TEST.tsv", te_l, te_v)
    return root / "toy_TRAIN.tsv", root / "toy_TEST.tsv"


def tiny_overrides(train, test, out, **extra):
    pairs = {
        "dataset.train": str(train),
        "dataset.test": str(test),
        "out": str(out),
        "steps": str(TINY_STEPS),
        "eval_epochs": "3",
        "seed": "7",
        "gan.batch_size": "8",
        "gan.n_critic": "2",
        "gan.g_channels": "8",
        "gan.f_channels": "4",
        "gan.dx_channels": "4",
        "gan.dy_channels": "4",
        "stft.window": "16",
        "stft.hop": "4",
        "stft.fft_size": "16",
        "checkpoint_every": "2",
    }
    pairs.update(extra)
    return pairs
