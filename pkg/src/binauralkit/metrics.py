"""Binaural evaluation metrics.

Five signal-distance metrics (STFT distance, envelope distance, wave L2,
multi-resolution STFT, SNR) and the SPL-difference spatial metric with its
direction/magnitude decomposition.
"""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field

import numpy as np

from .binaural import StereoWaveform
from .spectral import StftConfig, Waveform, stft

P_REF = 2e-5
SPL_NORM_FLOOR = 1e-10
SNR_CAP_DB = 120.0
MIDDLE_TOL = 1e-9
LOG_MAG_EPS = 1e-7

# (fft_size, hop_len, window_len)
MRSTFT_RESOLUTIONS = ((512, 128, 512), (1024, 256, 1024), (2048, 512, 2048))


class Direction(str, enum.Enum):
    LEFT = "Left"
    MIDDLE = "Middle"
    RIGHT = "Right"


@dataclass(frozen=True)
class SpatialCurve:
    """Per-frame SPL difference (left minus right), in dB."""

    frame_times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.array(self.frame_times, dtype=np.float64).reshape(-1)
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if times.shape != values.shape:
            raise ValueError(f"{times.size} frame times but {values.size} values")
        if not np.all(np.isfinite(values)) or not np.all(np.isfinite(times)):
            raise ValueError("spatial curve contains non-finite entries")
        if np.any(np.diff(times) <= 0):
            raise ValueError("frame times must be strictly increasing")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "frame_times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]

    def directions(self) -> list[Direction]:
        return [direction(v) for v in self.values]

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def negated(self) -> "SpatialCurve":
        return SpatialCurve(self.frame_times, -self.values)


@dataclass(frozen=True)
class MetricReport:
    stft_distance: float
    env_distance: float
    wave_l2: float
    mrstft: float
    snr_db: float
    spl_distance: float
    flags: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flags"] = list(self.flags)
        return d


def _check_pair(real: StereoWaveform, pred: StereoWaveform):
    if len(real) != len(pred):
        raise ValueError(f"length mismatch: real {len(real)}, pred {len(pred)}")
    if real.sample_rate != pred.sample_rate:
        raise ValueError(
            f"sample rate mismatch: real {real.sample_rate}, pred {pred.sample_rate}"
        )


def _channels(s: StereoWaveform):
    return (s.left, s.right)


def stft_distance(
    real: StereoWaveform,
    pred: StereoWaveform,
    cfg: StftConfig = StftConfig(),
    magnitude: bool = False,
) -> float:
    """Sum over channels of the Frobenius norm of the spectrogram difference.

    Complex spectrograms are compared by default; ``magnitude=True`` compares
    ``|S|`` instead.
    """
    _check_pair(real, pred)
    total = 0.0
    for a, b in zip(_channels(real), _channels(pred)):
        sa, sb = stft(a, cfg).data, stft(b, cfg).data
        if magnitude:
            sa, sb = np.abs(sa), np.abs(sb)
        total += float(np.linalg.norm(sa - sb))
    return total


def envelope(w: Waveform) -> Waveform:
    """Magnitude of the analytic signal, built with a full-length FFT."""
    n = len(w)
    if n == 0:
        raise ValueError("envelope of an empty waveform")
    spectrum = np.fft.fft(w.samples)
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1 : n // 2] = 2.0
    else:
        h[1 : (n + 1) // 2] = 2.0
    analytic = np.fft.ifft(spectrum * h)
    return Waveform(np.abs(analytic), w.sample_rate)


def env_distance(real: StereoWaveform, pred: StereoWaveform) -> float:
    _check_pair(real, pred)
    total = 0.0
    for a, b in zip(_channels(real), _channels(pred)):
        total += float(np.linalg.norm(envelope(a).samples - envelope(b).samples))
    return total


def wave_l2(real: StereoWaveform, pred: StereoWaveform) -> float:
    """Mean squared sample error over both channels."""
    _check_pair(real, pred)
    n = len(real)
    if n == 0:
        return 0.0
    sq_l = np.sum((real.left.samples - pred.left.samples) ** 2)
    sq_r = np.sum((real.right.samples - pred.right.samples) ** 2)
    return float((sq_l + sq_r) / (2 * n))


def _mrstft_magnitude(w: Waveform, fft_size: int, hop: int, win: int) -> np.ndarray:
    # Signals shorter than the window are zero-padded to one full frame.
    x = w.samples
    if x.shape[0] < win:
        x = np.concatenate((x, np.zeros(win - x.shape[0])))
    cfg = StftConfig(sample_rate=w.sample_rate, window_len=win, hop_len=hop, fft_size=fft_size)
    return np.abs(stft(Waveform(x, w.sample_rate), cfg).data)


def mrstft_terms(real: StereoWaveform, pred: StereoWaveform) -> tuple[float, tuple[str, ...]]:
    """Multi-resolution STFT distance plus any flags raised while computing it."""
    _check_pair(real, pred)
    flags = []
    total = 0.0
    for fft_size, hop, win in MRSTFT_RESOLUTIONS:
        terms = []
        for a, b in zip(_channels(real), _channels(pred)):
            mag_a = _mrstft_magnitude(a, fft_size, hop, win)
            mag_b = _mrstft_magnitude(b, fft_size, hop, win)
            ref = np.linalg.norm(mag_a)
            if ref > 0:
                sc = np.linalg.norm(mag_a - mag_b) / ref
            else:
                sc = 0.0
                flag = f"mrstft_sc_skipped:{fft_size}"
                if flag not in flags:
                    flags.append(flag)
            log_term = np.mean(np.abs(np.log(mag_a + LOG_MAG_EPS) - np.log(mag_b + LOG_MAG_EPS)))
            lin_term = np.mean(np.abs(mag_a - mag_b))
            terms.append(sc + log_term + lin_term)
        # pairwise sum keeps the result bit-identical under a channel swap
        total += terms[0] + terms[1]
    return float(total / (2 * len(MRSTFT_RESOLUTIONS))), tuple(flags)


def mrstft(real: StereoWaveform, pred: StereoWaveform) -> float:
    return mrstft_terms(real, pred)[0]


def snr(real: StereoWaveform, pred: StereoWaveform) -> float:
    """Signal-to-error power ratio in dB, capped at 120 dB."""
    _check_pair(real, pred)
    sig = np.sum(real.left.samples**2) + np.sum(real.right.samples**2)
    if sig == 0:
        raise ValueError("SNR undefined: reference signal is silent")
    err = np.sum((real.left.samples - pred.left.samples) ** 2) + np.sum(
        (real.right.samples - pred.right.samples) ** 2
    )
    if err <= sig * 10 ** (-SNR_CAP_DB / 10):
        return SNR_CAP_DB
    return float(10 * np.log10(sig / err))


def _spl_db(x: np.ndarray) -> float:
    return float(20 * np.log10(max(np.linalg.norm(x), SPL_NORM_FLOOR) / P_REF))


def spl(segment: Waveform) -> float:
    """Sound pressure level of a segment from its Euclidean norm (not RMS)."""
    if len(segment) == 0:
        raise ValueError("SPL of an empty segment")
    return _spl_db(segment.samples)


def spl_curve(s: StereoWaveform, frame_len: float = 0.1, frame_hop: float = 0.1) -> SpatialCurve:
    """Framewise ``SPL(left) - SPL(right)``; frame ``k`` starts at ``k * frame_hop``."""
    if not (frame_len > 0 and frame_hop > 0):
        raise ValueError(f"frame_len and frame_hop must be positive, got {frame_len}, {frame_hop}")
    rate = s.sample_rate
    flen = int(round(frame_len * rate))
    fhop = int(round(frame_hop * rate))
    if flen < 1 or fhop < 1:
        raise ValueError(f"frame parameters round to zero samples at {rate} Hz")
    n = len(s)
    if n < flen:
        raise ValueError(f"signal of {n} samples is shorter than one SPL frame ({flen})")
    n_frames = 1 + (n - flen) // fhop
    values = np.empty(n_frames)
    left, right = s.left.samples, s.right.samples
    for k in range(n_frames):
        sl = slice(k * fhop, k * fhop + flen)
        values[k] = _spl_db(left[sl]) - _spl_db(right[sl])
    times = np.arange(n_frames) * fhop / rate
    return SpatialCurve(times, values)


def spl_distance(real_curve: SpatialCurve, pred_curve: SpatialCurve) -> float:
    if len(real_curve) != len(pred_curve):
        raise ValueError(f"frame count mismatch: {len(real_curve)} vs {len(pred_curve)}")
    if not np.allclose(real_curve.frame_times, pred_curve.frame_times, rtol=0, atol=1e-9):
        raise ValueError("frame times differ between curves")
    return float(np.linalg.norm(real_curve.values - pred_curve.values))


def direction(sd_value: float) -> Direction:
    if not np.isfinite(sd_value):
        raise ValueError(f"direction of non-finite value {sd_value}")
    if abs(sd_value) <= MIDDLE_TOL:
        return Direction.MIDDLE
    return Direction.LEFT if sd_value > 0 else Direction.RIGHT


def magnitude(sd_value: float) -> float:
    if not np.isfinite(sd_value):
        raise ValueError(f"magnitude of non-finite value {sd_value}")
    return abs(float(sd_value))


def evaluate_all(
    real: StereoWaveform,
    pred: StereoWaveform,
    cfg: StftConfig = StftConfig(),
    frame_len: float = 0.1,
    frame_hop: float = 0.1,
) -> MetricReport:
    _check_pair(real, pred)
    mr, flags = mrstft_terms(real, pred)
    return MetricReport(
        stft_distance=stft_distance(real, pred, cfg),
        env_distance=env_distance(real, pred),
        wave_l2=wave_l2(real, pred),
        mrstft=mr,
        snr_db=snr(real, pred),
        spl_distance=spl_distance(
            spl_curve(real, frame_len, frame_hop), spl_curve(pred, frame_len, frame_hop)
        ),
        flags=flags,
    )
