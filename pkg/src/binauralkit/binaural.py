"""Mono/difference channel algebra and complex ratio masks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import ComplexSpectrogram, Waveform

MASK_CLAMP_MARGIN = 1e-6


@dataclass(frozen=True)
class StereoWaveform:
    left: Waveform
    right: Waveform

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise ValueError(
                f"channel length mismatch: left {len(self.left)}, right {len(self.right)}"
            )
        if self.left.sample_rate != self.right.sample_rate:
            raise ValueError(
                f"channel rate mismatch: left {self.left.sample_rate}, "
                f"right {self.right.sample_rate}"
            )

    @classmethod
    def from_arrays(cls, left, right, sample_rate: int) -> "StereoWaveform":
        return cls(Waveform(left, sample_rate), Waveform(right, sample_rate))

    @property
    def sample_rate(self) -> int:
        return self.left.sample_rate

    def __len__(self) -> int:
        return len(self.left)

    def swapped(self) -> "StereoWaveform":
        return StereoWaveform(self.right, self.left)


@dataclass(frozen=True)
class ComplexMask:
    data: np.ndarray
    bounded: bool = False

    def __post_init__(self):
        data = np.array(self.data, dtype=np.complex128)
        if data.ndim != 2:
            raise ValueError(f"mask must be 2-D, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("mask contains non-finite entries")
        if self.bounded and (
            np.any(np.abs(data.real) >= 1.0) or np.any(np.abs(data.imag) >= 1.0)
        ):
            raise ValueError("bounded mask has a component outside (-1, 1)")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def _check_aligned(a: Waveform, b: Waveform):
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if a.sample_rate != b.sample_rate:
        raise ValueError(f"sample rate mismatch: {a.sample_rate} vs {b.sample_rate}")


def mix_to_mono(s: StereoWaveform) -> Waveform:
    return Waveform(s.left.samples + s.right.samples, s.sample_rate)


def channel_difference(s: StereoWaveform) -> Waveform:
    return Waveform(s.left.samples - s.right.samples, s.sample_rate)


def reconstruct_stereo(mono: Waveform, diff: Waveform) -> StereoWaveform:
    """Invert the mix/difference pair: ``L = (M + D) / 2``, ``R = (M - D) / 2``."""
    _check_aligned(mono, diff)
    m, d = mono.samples, diff.samples
    return StereoWaveform.from_arrays((m + d) / 2, (m - d) / 2, mono.sample_rate)


def apply_mask(mono_spec: ComplexSpectrogram, m: ComplexMask) -> ComplexSpectrogram:
    if mono_spec.shape != m.shape:
        raise ValueError(f"mask shape {m.shape} does not match spectrogram {mono_spec.shape}")
    return ComplexSpectrogram(mono_spec.data * m.data, mono_spec.config)


def oracle_mask(
    mono_spec: ComplexSpectrogram, diff_spec: ComplexSpectrogram, eps: float = 1e-8
) -> ComplexMask:
    """Exact complex ratio ``diff / mono``; bins with ``|mono| < eps`` get 0."""
    if mono_spec.shape != diff_spec.shape:
        raise ValueError(
            f"spectrogram shapes differ: mono {mono_spec.shape}, diff {diff_spec.shape}"
        )
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    sm, sd = mono_spec.data, diff_spec.data
    keep = np.abs(sm) >= eps
    out = np.zeros_like(sm)
    np.divide(sd, sm, out=out, where=keep)
    return ComplexMask(out, bounded=False)


def bound_mask(m: ComplexMask, limit: float = 1.0) -> ComplexMask:
    """Clamp real and imaginary parts into ``[-limit + 1e-6, limit - 1e-6]``.

    Mirrors the output range of a tanh-activated mask head.
    """
    if not MASK_CLAMP_MARGIN < limit <= 1:
        raise ValueError(f"limit must lie in ({MASK_CLAMP_MARGIN}, 1], got {limit}")
    hi = limit - MASK_CLAMP_MARGIN
    re = np.clip(m.data.real, -hi, hi)
    im = np.clip(m.data.imag, -hi, hi)
    return ComplexMask(re + 1j * im, bounded=True)
