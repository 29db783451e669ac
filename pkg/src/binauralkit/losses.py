"""Scalar training objectives: adversarial value, BCE and spectrogram L1.

Plain numpy; no gradients. An external training loop can mirror these in its
own autodiff framework and check against them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import ComplexSpectrogram

PROB_CLAMP = 1e-7


@dataclass(frozen=True)
class DiscriminatorScores:
    on_real: np.ndarray
    on_fake: np.ndarray

    def __post_init__(self):
        for name in ("on_real", "on_fake"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=np.float64))
            if arr.ndim != 1:
                raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
            if np.any(~np.isfinite(arr)) or np.any((arr < 0) | (arr > 1)):
                raise ValueError(f"{name} must hold probabilities in [0, 1]")
            object.__setattr__(self, name, arr)


def _clamp(p: np.ndarray) -> np.ndarray:
    return np.clip(p, PROB_CLAMP, 1 - PROB_CLAMP)


def adversarial_value(scores: DiscriminatorScores) -> float:
    """``mean log D(real) + mean log(1 - D(fake))``, the quantity D maximizes."""
    if scores.on_real.size == 0 or scores.on_fake.size == 0:
        raise ValueError("adversarial value needs non-empty real and fake batches")
    real = _clamp(scores.on_real)
    fake = _clamp(scores.on_fake)
    return float(np.mean(np.log(real)) + np.mean(np.log1p(-fake)))


def bce_loss(predicted, targets) -> float:
    p = np.atleast_1d(np.asarray(predicted, dtype=np.float64))
    t = np.atleast_1d(np.asarray(targets, dtype=np.float64))
    if p.size == 0:
        raise ValueError("bce_loss of an empty batch")
    if p.shape != t.shape:
        raise ValueError(f"shape mismatch: predicted {p.shape}, targets {t.shape}")
    if np.any((t != 0) & (t != 1)):
        raise ValueError("targets must be 0/1 labels")
    p = _clamp(p)
    return float(np.mean(-(t * np.log(p) + (1 - t) * np.log1p(-p))))


def l1_spectrogram_loss(pred: ComplexSpectrogram, target: ComplexSpectrogram) -> float:
    """Mean absolute error over real and imaginary parts taken as separate entries."""
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: pred {pred.shape}, target {target.shape}")
    diff = pred.data - target.data
    return float((np.sum(np.abs(diff.real)) + np.sum(np.abs(diff.imag))) / (2 * diff.size))
