"""Minimal RIFF/WAVE reader and writer for PCM16 and IEEE float32, 1-2 channels."""
from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._atomic import atomic_write
from .binaural import StereoWaveform
from .spectral import Waveform

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE
_GUID_TAIL = b"\x00\x00\x10\x00\x80\x00\x00\xaa\x00\x38\x9b\x71"

PCM16_SCALE = 32768.0
PCM16_MAX = 32767 / 32768


class WavFormatError(ValueError):
    pass


class Encoding(str, enum.Enum):
    PCM16 = "pcm16"
    FLOAT32 = "float32"


@dataclass(frozen=True)
class AudioFileDescriptor:
    path: str
    encoding: Encoding
    channels: int
    sample_rate: int
    num_samples: int
    clipped: int = 0


def _parse(raw: bytes, path: str):
    if len(raw) < 12:
        raise WavFormatError(f"{path}: file is {len(raw)} bytes, RIFF header needs 12")
    if raw[0:4] != b"RIFF":
        raise WavFormatError(f"{path}: expected b'RIFF' at byte 0, found {raw[0:4]!r}")
    if raw[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: expected b'WAVE' at byte 8, found {raw[8:12]!r}")

    fmt = None
    offset = 12
    while offset + 8 <= len(raw):
        chunk_id = raw[offset : offset + 4]
        (size,) = struct.unpack_from("<I", raw, offset + 4)
        body = offset + 8
        if chunk_id == b"fmt ":
            if size < 16 or body + size > len(raw):
                raise WavFormatError(f"{path}: malformed fmt chunk of size {size} at byte {offset}")
            tag, channels, rate, _, block_align, bits = struct.unpack_from("<HHIIHH", raw, body)
            if tag == WAVE_FORMAT_EXTENSIBLE:
                if size < 40:
                    raise WavFormatError(
                        f"{path}: extensible fmt chunk at byte {offset} is {size} bytes, needs 40"
                    )
                guid = raw[body + 24 : body + 40]
                if guid[4:] != _GUID_TAIL:
                    raise WavFormatError(f"{path}: unknown extensible subformat at byte {body + 24}")
                (tag,) = struct.unpack_from("<I", guid)
            fmt = (tag, channels, rate, block_align, bits, offset)
        elif chunk_id == b"data":
            if fmt is None:
                raise WavFormatError(f"{path}: data chunk at byte {offset} precedes fmt chunk")
            available = len(raw) - body
            if size > available:
                raise WavFormatError(
                    f"{path}: data chunk at byte {offset} truncated: header declares "
                    f"{size} bytes, file holds {available}"
                )
            return fmt, raw[body : body + size], body
        offset = body + size + (size & 1)
    if fmt is None:
        raise WavFormatError(f"{path}: no fmt chunk found before byte {len(raw)}")
    raise WavFormatError(f"{path}: no data chunk found before byte {len(raw)}")


def _decode(path) -> tuple[np.ndarray, AudioFileDescriptor]:
    path = str(path)
    raw = Path(path).read_bytes()
    (tag, channels, rate, block_align, bits, fmt_at), payload, data_at = _parse(raw, path)
    if channels not in (1, 2):
        raise WavFormatError(f"{path}: {channels} channels at byte {fmt_at + 10}; only 1 or 2 supported")
    if tag == WAVE_FORMAT_PCM and bits == 16:
        encoding, dtype = Encoding.PCM16, "<i2"
    elif tag == WAVE_FORMAT_IEEE_FLOAT and bits == 32:
        encoding, dtype = Encoding.FLOAT32, "<f4"
    else:
        raise WavFormatError(
            f"{path}: unsupported encoding (format tag {tag:#06x}, {bits} bits) "
            f"in fmt chunk at byte {fmt_at}"
        )
    frame_bytes = channels * bits // 8
    if block_align != frame_bytes:
        raise WavFormatError(
            f"{path}: block_align {block_align} at byte {fmt_at + 20} does not match "
            f"{channels} x {bits}-bit samples"
        )
    if len(payload) % frame_bytes:
        raise WavFormatError(
            f"{path}: data chunk at byte {data_at} holds {len(payload)} bytes, "
            f"not a multiple of the {frame_bytes}-byte frame"
        )
    data = np.frombuffer(payload, dtype=dtype).astype(np.float64)
    if encoding is Encoding.PCM16:
        data /= PCM16_SCALE
    frames = data.reshape(-1, channels)
    desc = AudioFileDescriptor(path, encoding, channels, rate, frames.shape[0])
    return frames, desc


def probe_wav(path) -> AudioFileDescriptor:
    return _decode(path)[1]


def read_wav(path) -> Waveform | StereoWaveform:
    frames, desc = _decode(path)
    if desc.channels == 1:
        return Waveform(frames[:, 0], desc.sample_rate)
    return StereoWaveform.from_arrays(frames[:, 0], frames[:, 1], desc.sample_rate)


def write_wav(path, audio: Waveform | StereoWaveform, encoding=Encoding.FLOAT32) -> AudioFileDescriptor:
    """Write ``audio`` atomically (temp file + rename); out-of-range samples are clamped.

    PCM16 clamps to ``[-1, 32767/32768]``; float32 clamps to ``[-1, 1]``.
    The returned descriptor's ``clipped`` counts clamped samples.
    """
    encoding = Encoding(encoding)
    if isinstance(audio, StereoWaveform):
        frames = np.stack([audio.left.samples, audio.right.samples], axis=1)
        rate = audio.sample_rate
    else:
        frames = audio.samples[:, None]
        rate = audio.sample_rate
    channels = frames.shape[1]

    hi = PCM16_MAX if encoding is Encoding.PCM16 else 1.0
    clipped = int(np.count_nonzero((frames < -1.0) | (frames > hi)))
    frames = np.clip(frames, -1.0, hi)
    if encoding is Encoding.PCM16:
        payload = np.round(frames * PCM16_SCALE).astype("<i2").tobytes()
        tag, bits = WAVE_FORMAT_PCM, 16
    else:
        payload = frames.astype("<f4").tobytes()
        tag, bits = WAVE_FORMAT_IEEE_FLOAT, 32

    block_align = channels * bits // 8
    fmt = struct.pack("<HHIIHH", tag, channels, rate, rate * block_align, block_align, bits)
    chunks = [b"fmt ", struct.pack("<I", len(fmt)), fmt]
    if tag == WAVE_FORMAT_IEEE_FLOAT:
        # non-PCM formats carry a fact chunk with the frame count
        chunks += [b"fact", struct.pack("<II", 4, frames.shape[0])]
    chunks += [b"data", struct.pack("<I", len(payload)), payload]
    if len(payload) & 1:
        chunks.append(b"\x00")
    body = b"WAVE" + b"".join(chunks)
    blob = b"RIFF" + struct.pack("<I", len(body)) + body

    atomic_write(path, blob)
    return AudioFileDescriptor(str(path), encoding, channels, rate, frames.shape[0], clipped)
