"""Binary container for externally produced per-window complex masks.

Layout (all integers little-endian)::

    header, 40 bytes
      0   4s  magic  b"BMSK"
      4   u16 version (1)
      6   u16 reserved (0)
      8   u32 sample_rate
     12   u32 window_len      STFT window, samples
     16   u32 hop_len         STFT hop, samples
     20   u32 fft_size
     24   u32 segment_len     sliding-window length, samples
     28   u32 segment_hop     sliding-window hop, samples
     32   u32 n_records
     36   u32 reserved (0)
    record, repeated n_records times
      0   u32 window index
      4   u32 bins
      8   u32 frames
     12   f64[bins * frames * 2]  row-major (bin-major), interleaved re, im

Records may appear in any order; duplicate indices are rejected.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._atomic import atomic_write
from .spectral import StftConfig

MAGIC = b"BMSK"
VERSION = 1
_HEADER = struct.Struct("<4sHHIIIIIIII")
_RECORD = struct.Struct("<III")


class MaskFileError(ValueError):
    pass


@dataclass(frozen=True)
class MaskFileHeader:
    config: StftConfig
    segment_len: int
    segment_hop: int
    n_records: int


def write_mask_file(
    path,
    masks: dict[int, np.ndarray],
    cfg: StftConfig,
    segment_len: int,
    segment_hop: int,
) -> None:
    """Write ``{window index: complex (bins, frames) array}`` atomically."""
    chunks = [
        _HEADER.pack(
            MAGIC, VERSION, 0, cfg.sample_rate, cfg.window_len, cfg.hop_len,
            cfg.fft_size, segment_len, segment_hop, len(masks), 0,
        )
    ]
    for index in sorted(masks):
        data = np.asarray(masks[index], dtype=np.complex128)
        if data.ndim != 2:
            raise ValueError(f"mask for window {index} must be 2-D, got shape {data.shape}")
        chunks.append(_RECORD.pack(index, *data.shape))
        chunks.append(np.ascontiguousarray(data).view(np.float64).astype("<f8").tobytes())
    atomic_write(path, b"".join(chunks))


def read_mask_file(path) -> tuple[MaskFileHeader, dict[int, np.ndarray]]:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise MaskFileError(
            f"mask file truncated at byte {len(raw)}: header needs {_HEADER.size} bytes"
        )
    (magic, version, _, rate, win, hop, nfft, seg_len, seg_hop, n_rec, _) = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise MaskFileError(f"bad magic {magic!r} at byte 0, expected {MAGIC!r}")
    if version != VERSION:
        raise MaskFileError(f"unsupported mask file version {version} at byte 4")
    try:
        cfg = StftConfig(rate, win, hop, nfft)
    except ValueError as exc:
        raise MaskFileError(f"invalid STFT parameters in header: {exc}") from None
    header = MaskFileHeader(cfg, seg_len, seg_hop, n_rec)

    masks: dict[int, np.ndarray] = {}
    offset = _HEADER.size
    for _ in range(n_rec):
        if offset + _RECORD.size > len(raw):
            raise MaskFileError(f"record header truncated at byte {offset}")
        index, bins, frames = _RECORD.unpack_from(raw, offset)
        offset += _RECORD.size
        if bins != cfg.n_bins:
            raise MaskFileError(
                f"window {index} at byte {offset - _RECORD.size}: {bins} bins, "
                f"header config implies {cfg.n_bins}"
            )
        if index in masks:
            raise MaskFileError(f"duplicate window index {index} at byte {offset - _RECORD.size}")
        n_bytes = bins * frames * 16
        if offset + n_bytes > len(raw):
            raise MaskFileError(
                f"window {index} payload truncated at byte {offset}: expected {n_bytes} bytes, "
                f"found {len(raw) - offset}"
            )
        values = np.frombuffer(raw, dtype="<f8", count=bins * frames * 2, offset=offset)
        if not np.all(np.isfinite(values)):
            raise MaskFileError(f"window {index} at byte {offset}: non-finite mask values")
        masks[index] = values.astype(np.float64).view(np.complex128).reshape(bins, frames)
        offset += n_bytes
    if offset != len(raw):
        raise MaskFileError(f"{len(raw) - offset} trailing bytes after last record at byte {offset}")
    return header, masks
