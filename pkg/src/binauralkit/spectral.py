"""Short-time Fourier analysis/synthesis, windowing and resampling.

Framing convention: no center padding, frame ``k`` starts at ``k * hop_len``,
each frame is Hann-windowed over ``window_len`` samples and zero-padded at the
end to ``fft_size`` before a one-sided real FFT.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ENVELOPE_FLOOR = 1e-12


@dataclass(frozen=True)
class StftConfig:
    sample_rate: int = 16000
    window_len: int = 400  # 25 ms
    hop_len: int = 240  # 15 ms
    fft_size: int = 448

    def __post_init__(self):
        for name in ("sample_rate", "window_len", "hop_len", "fft_size"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.hop_len > self.window_len:
            raise ValueError(
                f"hop_len ({self.hop_len}) must not exceed window_len ({self.window_len})"
            )
        if self.window_len > self.fft_size:
            raise ValueError(
                f"window_len ({self.window_len}) must not exceed fft_size ({self.fft_size})"
            )

    @property
    def n_bins(self) -> int:
        return self.fft_size // 2 + 1

    def n_frames(self, n_samples: int) -> int:
        if n_samples < self.window_len:
            return 0
        return 1 + (n_samples - self.window_len) // self.hop_len

    def frames_extent(self, n_frames: int) -> int:
        """Number of samples spanned by ``n_frames`` frames."""
        if n_frames <= 0:
            return 0
        return (n_frames - 1) * self.hop_len + self.window_len


@dataclass(frozen=True)
class Waveform:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"waveform samples must be 1-D, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("waveform contains non-finite samples")
        if int(self.sample_rate) != self.sample_rate or self.sample_rate < 1:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate


@dataclass(frozen=True)
class ComplexSpectrogram:
    """One-sided complex STFT, shape ``(bins, frames)``."""

    data: np.ndarray
    config: StftConfig = field(default_factory=StftConfig)

    def __post_init__(self):
        data = np.array(self.data, dtype=np.complex128)
        if data.ndim != 2:
            raise ValueError(f"spectrogram must be 2-D, got shape {data.shape}")
        if data.shape[0] != self.config.n_bins:
            raise ValueError(
                f"spectrogram has {data.shape[0]} bins, config implies {self.config.n_bins}"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("spectrogram contains non-finite entries")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def n_frames(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class EdgeRegion:
    """Output samples that could not be normalized by the synthesis envelope.

    ``mask[i]`` is True where the summed squared window fell below the floor
    (or the sample lies past the last frame) and the raw overlap-add value was
    kept instead.
    """

    mask: np.ndarray

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def ranges(self) -> list[tuple[int, int]]:
        """Half-open ``(start, stop)`` runs of flagged samples."""
        padded = np.concatenate(([False], self.mask, [False])).astype(np.int8)
        edges = np.flatnonzero(np.diff(padded))
        return [(int(a), int(b)) for a, b in zip(edges[::2], edges[1::2])]


def hann_window(window_len: int) -> np.ndarray:
    """Periodic Hann window ``0.5 - 0.5 cos(2 pi n / N)``."""
    if window_len < 1:
        raise ValueError(f"window length must be >= 1, got {window_len}")
    n = np.arange(window_len)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * n / window_len)


def _frames(x: np.ndarray, cfg: StftConfig) -> np.ndarray:
    n_frames = cfg.n_frames(x.shape[0])
    view = np.lib.stride_tricks.sliding_window_view(x, cfg.window_len)
    return view[:: cfg.hop_len][:n_frames]


def stft(w: Waveform, cfg: StftConfig = StftConfig()) -> ComplexSpectrogram:
    if w.sample_rate != cfg.sample_rate:
        raise ValueError(
            f"sample rate mismatch: waveform {w.sample_rate} Hz, config {cfg.sample_rate} Hz"
        )
    if len(w) < cfg.window_len:
        raise ValueError(
            f"signal of {len(w)} samples is shorter than one window ({cfg.window_len})"
        )
    frames = _frames(w.samples, cfg) * hann_window(cfg.window_len)
    spec = np.fft.rfft(frames, n=cfg.fft_size, axis=1)
    return ComplexSpectrogram(spec.T, cfg)


def istft(s: ComplexSpectrogram, out_len: int, return_edges: bool = False):
    """Weighted overlap-add inverse of :func:`stft`.

    Each frame is inverted, cropped to ``window_len``, multiplied by the Hann
    synthesis window and summed; the sum is divided by the accumulated squared
    window. Samples where that envelope is below ``ENVELOPE_FLOOR`` keep the
    unnormalized sum and are reported in the :class:`EdgeRegion` when
    ``return_edges`` is set.
    """
    cfg = s.config
    if out_len < 0:
        raise ValueError(f"out_len must be non-negative, got {out_len}")
    n_frames = s.n_frames
    window = hann_window(cfg.window_len)
    extent = cfg.frames_extent(n_frames)

    acc = np.zeros(max(extent, out_len))
    env = np.zeros_like(acc)
    if n_frames:
        frames = np.fft.irfft(s.data.T, n=cfg.fft_size, axis=1)[:, : cfg.window_len]
        frames *= window
        idx = np.arange(n_frames)[:, None] * cfg.hop_len + np.arange(cfg.window_len)
        np.add.at(acc, idx, frames)
        np.add.at(env, idx, np.broadcast_to(window**2, frames.shape))

    acc = acc[:out_len]
    env = env[:out_len]
    edge = env < ENVELOPE_FLOOR
    out = acc.copy()
    np.divide(acc, env, out=out, where=~edge)
    wave = Waveform(out, cfg.sample_rate)
    if return_edges:
        return wave, EdgeRegion(edge)
    return wave


def _kaiser_sinc_weights(offsets: np.ndarray, cutoff: float, half_width: float, beta: float):
    # offsets in input samples; cutoff as a fraction of the input Nyquist
    taper = np.clip(offsets / half_width, -1.0, 1.0)
    window = np.i0(beta * np.sqrt(1.0 - taper**2)) / np.i0(beta)
    window[np.abs(offsets) > half_width] = 0.0
    return cutoff * np.sinc(cutoff * offsets) * window


def resample(
    w: Waveform,
    target_rate: int,
    taps: int = 64,
    beta: float = 8.6,
    block: int = 8192,
) -> Waveform:
    """Band-limited windowed-sinc resampling with a Kaiser-windowed kernel.

    ``taps`` counts kernel taps at the lower of the two rates. Each output
    sample is normalized by the sum of its kernel weights, so constant
    signals pass through exactly.
    """
    if int(target_rate) != target_rate or target_rate < 1:
        raise ValueError(f"target_rate must be a positive integer, got {target_rate!r}")
    target_rate = int(target_rate)
    if target_rate == w.sample_rate:
        return w
    ratio = target_rate / w.sample_rate
    n_in = len(w)
    n_out = int(round(n_in * ratio))
    if n_in == 0 or n_out == 0:
        return Waveform(np.zeros(n_out), target_rate)

    cutoff = min(1.0, ratio)
    half_width = (taps / 2) / cutoff
    reach = int(np.ceil(half_width))
    x = w.samples
    out = np.empty(n_out)
    k = np.arange(-reach, reach + 1)
    for lo in range(0, n_out, block):
        t = np.arange(lo, min(lo + block, n_out)) / ratio
        base = np.floor(t).astype(np.int64)
        idx = base[:, None] + k
        weights = _kaiser_sinc_weights(t[:, None] - idx, cutoff, half_width, beta)
        weights[(idx < 0) | (idx >= n_in)] = 0.0
        vals = x[np.clip(idx, 0, n_in - 1)]
        norm = weights.sum(axis=1)
        norm[norm == 0.0] = 1.0
        out[lo : lo + t.shape[0]] = (weights * vals).sum(axis=1) / norm
    return Waveform(out, target_rate)
