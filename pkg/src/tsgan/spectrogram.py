"""Short-time Fourier transform spectrogram images.

The transform is self-contained: a radix-2 FFT for power-of-two frame sizes
with a naive O(n^2) DFT fallback, a Hann window, log-magnitude scaling with a
dB floor, and per-image min-max normalization replicated to three channels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SpectrogramError(ValueError):
    pass


@dataclass(frozen=True)
class StftConfig:
    window_length: int = 32
    hop: int = 8
    fft_size: int = 64
    window_kind: str = "hann"
    log_floor_db: float = -80.0

    def __post_init__(self):
        if not (0 < self.hop <= self.window_length <= self.fft_size):
            raise SpectrogramError(
                f"need 0 < hop <= window <= fft_size, got "
                f"hop={self.hop} window={self.window_length} fft={self.fft_size}"
            )
        if self.fft_size & (self.fft_size - 1):
            raise SpectrogramError(f"fft_size must be a power of two, got {self.fft_size}")
        if self.window_kind != "hann":
            raise SpectrogramError(f"unsupported window kind '{self.window_kind}'")

    @property
    def n_bins(self) -> int:
        return self.fft_size // 2 + 1

    def n_frames(self, signal_length: int) -> int:
        if signal_length < self.window_length:
            raise SpectrogramError(
                f"series of length {signal_length} shorter than window {self.window_length}"
            )
        return (signal_length - self.window_length) // self.hop + 1


@dataclass
class SpectrogramImage:
    """(3, H, W) image with all values in [0, 1]; channels are identical."""

    values: np.ndarray

    @property
    def channels(self) -> int:
        return int(self.values.shape[0])

    @property
    def height(self) -> int:
        return int(self.values.shape[1])

    @property
    def width(self) -> int:
        return int(self.values.shape[2])


def hann_window(n: int) -> np.ndarray:
    if n == 1:
        return np.ones(1)
    k = np.arange(n)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * k / (n - 1)))


def naive_dft(frame: np.ndarray) -> np.ndarray:
    """Direct O(n^2) DFT, the reference implementation."""
    x = np.asarray(frame, dtype=np.complex128)
    n = x.shape[-1]
    k = np.arange(n)
    basis = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return x @ basis.T


_REV_CACHE: dict[int, np.ndarray] = {}


def _bit_reversal(n: int) -> np.ndarray:
    perm = _REV_CACHE.get(n)
    if perm is None:
        bits = n.bit_length() - 1
        perm = np.zeros(n, dtype=np.intp)
        for i in range(n):
            r = 0
            v = i
            for _ in range(bits):
                r = (r << 1) | (v & 1)
                v >>= 1
            perm[i] = r
        _REV_CACHE[n] = perm
    return perm


def fft_radix2(frames: np.ndarray) -> np.ndarray:
    """Iterative Cooley-Tukey FFT over the last axis (power-of-two length),
    vectorized over any leading axes."""
    x = np.asarray(frames, dtype=np.complex128)
    n = x.shape[-1]
    if n & (n - 1):
        raise SpectrogramError(f"radix-2 FFT needs power-of-two length, got {n}")
    out = x[..., _bit_reversal(n)]
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(x.shape[:-1] + (n // size, size))
        even = blocks[..., :half]
        odd = blocks[..., half:] * twiddle
        out = np.concatenate([even + odd, even - odd], axis=-1).reshape(x.shape)
        size *= 2
    return out


def dft(frame: np.ndarray) -> np.ndarray:
    """Unnormalized DFT over the last axis: radix-2 FFT when the length is a
    power of two, naive DFT otherwise."""
    n = np.asarray(frame).shape[-1]
    if n & (n - 1):
        return naive_dft(frame)
    return fft_radix2(frame)


def stft_spectrogram(series: np.ndarray, cfg: StftConfig) -> SpectrogramImage:
    """Hann-windowed log-magnitude spectrogram, min-max scaled to [0, 1] and
    replicated to three channels.  Shape is (3, n_bins, n_frames)."""
    x = np.asarray(series, dtype=np.float64).reshape(-1)
    n_frames = cfg.n_frames(x.size)
    win = hann_window(cfg.window_length)
    starts = np.arange(n_frames) * cfg.hop
    frames = np.stack([x[s : s + cfg.window_length] for s in starts]) * win
    padded = np.zeros((n_frames, cfg.fft_size))
    padded[:, : cfg.window_length] = frames
    spectrum = fft_radix2(padded)[:, : cfg.n_bins]
    floor_amp = 10.0 ** (cfg.log_floor_db / 20.0)
    mag_db = 20.0 * np.log10(np.maximum(np.abs(spectrum), floor_amp))
    lo, hi = mag_db.min(), mag_db.max()
    scaled = (mag_db - lo) / (hi - lo) if hi > lo else np.zeros_like(mag_db)
    image = scaled.T.astype(np.float32)  # (bins, frames)
    return SpectrogramImage(values=np.repeat(image[None, :, :], 3, axis=0))


def spectrogram_batch(values: np.ndarray, cfg: StftConfig) -> np.ndarray:
    """Stack of spectrogram images for a batch of series: (n, 3, H, W)."""
    return np.stack([stft_spectrogram(v, cfg).values for v in values])
