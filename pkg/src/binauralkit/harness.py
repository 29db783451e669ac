"""Sliding-window mono-to-binaural pipeline.

Each window of the mono signal is transformed, masked by a provider, inverted
to a difference segment, and the segments are averaged back together before
the stereo pair is rebuilt from ``mono`` and the stitched difference.
"""
from __future__ import annotations

import abc
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .binaural import (
    ComplexMask,
    StereoWaveform,
    apply_mask,
    channel_difference,
    oracle_mask,
    reconstruct_stereo,
)
from .maskfile import read_mask_file
from .spectral import ComplexSpectrogram, StftConfig, Waveform, istft, stft


class MaskProviderError(RuntimeError):
    def __init__(self, window: int, message: str):
        super().__init__(f"window {window}: {message}")
        self.window = window


@dataclass(frozen=True)
class WindowPlan:
    starts: np.ndarray
    window_len: int
    hop: int
    total_len: int
    has_tail: bool = False

    @property
    def n_windows(self) -> int:
        return self.starts.shape[0]

    @property
    def n_full(self) -> int:
        return self.n_windows - int(self.has_tail)

    def coverage(self) -> np.ndarray:
        counts = np.zeros(self.total_len, dtype=np.int64)
        for s in self.starts:
            counts[s : s + self.window_len] += 1
        return counts


def plan_windows(
    total_len: int, window_s: float = 1.0, hop_s: float = 0.1, rate: int = 16000
) -> WindowPlan:
    """Regular windows at ``k * hop`` plus one tail window flush with the end if needed."""
    if not (window_s > 0 and hop_s > 0):
        raise ValueError(f"window and hop must be positive, got {window_s}, {hop_s}")
    window = int(round(window_s * rate))
    hop = int(round(hop_s * rate))
    if window < 1 or hop < 1:
        raise ValueError(f"window/hop round to zero samples at {rate} Hz")
    if hop > window:
        raise ValueError(f"hop ({hop} samples) longer than window ({window}) leaves gaps")
    if total_len < window:
        raise ValueError(f"audio of {total_len} samples is shorter than one window ({window})")
    n_full = 1 + (total_len - window) // hop
    starts = np.arange(n_full, dtype=np.int64) * hop
    tail = int(starts[-1]) + window < total_len
    if tail:
        starts = np.append(starts, total_len - window)
    return WindowPlan(starts, window, hop, total_len, has_tail=tail)


def stitch(segments, plan: WindowPlan, valid=None) -> np.ndarray:
    """Average overlapping segments sample by sample.

    With ``valid`` (one boolean array per segment), only flagged-valid samples
    count toward a sample's average; samples no window covers validly fall
    back to the plain average over all covering windows.
    """
    segments = [np.asarray(s, dtype=np.float64) for s in segments]
    if len(segments) != plan.n_windows:
        raise ValueError(f"{len(segments)} segments for a plan of {plan.n_windows} windows")
    for i, seg in enumerate(segments):
        if seg.shape != (plan.window_len,):
            raise ValueError(
                f"segment {i} has shape {seg.shape}, expected ({plan.window_len},)"
            )
    if valid is not None and len(valid) != len(segments):
        raise ValueError(f"{len(valid)} validity masks for {len(segments)} segments")

    acc = np.zeros(plan.total_len)
    count = np.zeros(plan.total_len)
    acc_valid = np.zeros(plan.total_len)
    count_valid = np.zeros(plan.total_len)
    for i, (start, seg) in enumerate(zip(plan.starts, segments)):
        sl = slice(start, start + plan.window_len)
        acc[sl] += seg
        count[sl] += 1
        if valid is not None:
            ok = np.asarray(valid[i], dtype=bool)
            acc_valid[sl] += np.where(ok, seg, 0.0)
            count_valid[sl] += ok
    if np.any(count == 0):
        raise ValueError("plan leaves samples uncovered")
    if valid is None:
        return acc / count
    use_valid = count_valid > 0
    return np.where(use_valid, acc_valid / np.where(use_valid, count_valid, 1), acc / count)


class MaskProvider(abc.ABC):
    """Source of a complex mask for each mono window spectrogram."""

    kind: str = "abstract"
    # False makes the harness query windows one at a time, in order.
    concurrent_safe: bool = True

    def prepare(self, cfg: StftConfig, plan: WindowPlan) -> None:
        """Validate against the run configuration before any window is queried."""

    @abc.abstractmethod
    def mask(self, index: int, start: int, mono_spec: ComplexSpectrogram) -> ComplexMask:
        ...


class ZeroDifferenceProvider(MaskProvider):
    kind = "zero"

    def mask(self, index, start, mono_spec):
        return ComplexMask(np.zeros(mono_spec.shape, dtype=np.complex128))


class OracleProvider(MaskProvider):
    """Exact masks inverted from a ground-truth stereo recording."""

    kind = "oracle"

    def __init__(self, truth: StereoWaveform, eps: float = 1e-8):
        self.truth = truth
        self.eps = eps
        self._diff = channel_difference(truth)

    def prepare(self, cfg, plan):
        if self.truth.sample_rate != cfg.sample_rate:
            raise ValueError(
                f"truth sample rate {self.truth.sample_rate} differs from config {cfg.sample_rate}"
            )
        if len(self.truth) != plan.total_len:
            raise ValueError(
                f"truth has {len(self.truth)} samples, mono has {plan.total_len}"
            )

    def mask(self, index, start, mono_spec):
        cfg = mono_spec.config
        seg_len = cfg.frames_extent(mono_spec.n_frames)
        seg = self._diff.samples[start : start + seg_len]
        diff_spec = stft(Waveform(seg, cfg.sample_rate), cfg)
        return oracle_mask(mono_spec, diff_spec, self.eps)


class FileMaskProvider(MaskProvider):
    """Masks read from a container written by :func:`maskfile.write_mask_file`."""

    kind = "file"

    def __init__(self, path):
        self.path = path
        self.header, self.masks = read_mask_file(path)

    def prepare(self, cfg, plan):
        h = self.header
        if h.config != cfg:
            raise ValueError(f"mask file STFT config {h.config} differs from run config {cfg}")
        if h.segment_len != plan.window_len or h.segment_hop != plan.hop:
            raise ValueError(
                f"mask file windows ({h.segment_len}/{h.segment_hop} samples) differ from "
                f"plan ({plan.window_len}/{plan.hop})"
            )

    def mask(self, index, start, mono_spec):
        try:
            data = self.masks[index]
        except KeyError:
            raise MaskProviderError(index, f"no mask in {self.path}") from None
        return ComplexMask(data)


def _run_window(provider, index, start, mono, cfg, window_len):
    seg = Waveform(mono[start : start + window_len], cfg.sample_rate)
    spec = stft(seg, cfg)
    try:
        m = provider.mask(index, start, spec)
    except MaskProviderError:
        raise
    except Exception as exc:
        raise MaskProviderError(index, f"{type(exc).__name__}: {exc}") from exc
    if m.shape != spec.shape:
        raise MaskProviderError(index, f"mask shape {m.shape}, spectrogram shape {spec.shape}")
    diff, edges = istft(apply_mask(spec, m), window_len, return_edges=True)
    return diff.samples, ~edges.mask


def binauralize(
    mono: Waveform,
    provider: MaskProvider,
    cfg: StftConfig = StftConfig(),
    window_s: float = 1.0,
    hop_s: float = 0.1,
    max_workers: int | None = None,
) -> StereoWaveform:
    if mono.sample_rate != cfg.sample_rate:
        raise ValueError(
            f"mono sample rate {mono.sample_rate} differs from config {cfg.sample_rate}"
        )
    plan = plan_windows(len(mono), window_s, hop_s, cfg.sample_rate)
    if plan.window_len < cfg.window_len:
        raise ValueError(
            f"sliding window ({plan.window_len} samples) shorter than STFT window ({cfg.window_len})"
        )
    provider.prepare(cfg, plan)

    def job(i):
        return _run_window(provider, i, int(plan.starts[i]), mono.samples, cfg, plan.window_len)

    indices = range(plan.n_windows)
    if max_workers and max_workers > 1 and provider.concurrent_safe:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(job, indices))
    else:
        results = [job(i) for i in indices]

    segments = [r[0] for r in results]
    valid = [r[1] for r in results]
    diff = Waveform(stitch(segments, plan, valid), cfg.sample_rate)
    return reconstruct_stereo(mono, diff)


def oracle_masks(
    mono: Waveform,
    truth: StereoWaveform,
    cfg: StftConfig = StftConfig(),
    window_s: float = 1.0,
    hop_s: float = 0.1,
    eps: float = 1e-8,
) -> tuple[WindowPlan, dict[int, np.ndarray]]:
    """Per-window oracle masks, in the shape the mask file expects."""
    plan = plan_windows(len(mono), window_s, hop_s, cfg.sample_rate)
    provider = OracleProvider(truth, eps)
    provider.prepare(cfg, plan)
    out = {}
    for i, start in enumerate(plan.starts):
        seg = Waveform(mono.samples[start : start + plan.window_len], cfg.sample_rate)
        out[i] = provider.mask(i, int(start), stft(seg, cfg)).data
    return plan, out
