"""Synthetic stereo test signals: panned sine mixtures over a panned noise bed."""
from __future__ import annotations

import numpy as np

from .binaural import StereoWaveform, mix_to_mono
from .harness import plan_windows
from .spectral import StftConfig, Waveform, stft


def panned_sines(
    seed: int,
    duration: float = 2.0,
    rate: int = 16000,
    n_tones: int = 6,
    noise_level: float = 0.05,
    fade_s: float = 0.01,
) -> StereoWaveform:
    """Tones with random frequency, phase, gain and pan, plus two panned noise beds.

    Every channel gets a raised-cosine fade in/out so the first and last
    samples are zero; the analysis window cannot see sample 0.
    """
    rng = np.random.default_rng(seed)
    n = int(round(duration * rate))
    t = np.arange(n) / rate
    left = np.zeros(n)
    right = np.zeros(n)
    for _ in range(n_tones):
        freq = rng.uniform(80.0, 0.45 * rate)
        phase = rng.uniform(0, 2 * np.pi)
        gain = rng.uniform(0.02, 0.08)
        pan = rng.uniform(0.0, 1.0)
        tone = gain * np.sin(2 * np.pi * freq * t + phase)
        left += pan * tone
        right += (1 - pan) * tone
    for _ in range(2):
        pan = rng.uniform(0.1, 0.9)
        bed = noise_level * rng.standard_normal(n)
        left += pan * bed
        right += (1 - pan) * bed

    n_fade = int(round(fade_s * rate))
    if n_fade:
        ramp = 0.5 - 0.5 * np.cos(np.pi * np.arange(n_fade) / n_fade)
        fade = np.ones(n)
        fade[:n_fade] = ramp
        fade[n - n_fade :] = ramp[::-1]
        left *= fade
        right *= fade
    return StereoWaveform.from_arrays(left, right, rate)


def min_mono_bin_magnitude(
    s: StereoWaveform, cfg: StftConfig = StftConfig(), window_s: float = 1.0, hop_s: float = 0.1
) -> float:
    """Smallest ``|S^M|`` over every bin of every sliding-window spectrogram."""
    mono = mix_to_mono(s).samples
    plan = plan_windows(len(mono), window_s, hop_s, cfg.sample_rate)
    lowest = np.inf
    for start in plan.starts:
        seg = Waveform(mono[start : start + plan.window_len], cfg.sample_rate)
        lowest = min(lowest, float(np.abs(stft(seg, cfg).data).min()))
    return lowest


def oracle_fixtures(count: int, first_seed: int = 0, floor: float = 1e-3, **kwargs):
    """First ``count`` panned-sine fixtures whose mono spectrum stays above ``floor``.

    Seeds that violate the floor are skipped, so the result is deterministic.
    """
    out = []
    seed = first_seed
    while len(out) < count:
        fx = panned_sines(seed, **kwargs)
        if min_mono_bin_magnitude(fx) >= floor:
            out.append((seed, fx))
        seed += 1
        if seed - first_seed > 50 * count:
            raise RuntimeError(f"could not find {count} fixtures above magnitude floor {floor}")
    return out
