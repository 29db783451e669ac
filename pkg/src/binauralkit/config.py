"""Run parameters and the plain-text ``key=value`` config file.

Precedence: command-line flags > config file > defaults.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .spectral import StftConfig


@dataclass(frozen=True)
class RunConfig:
    sample_rate: int = 16000
    window_len: int = 400
    hop_len: int = 240
    fft_size: int = 448
    window_s: float = 1.0  # sliding inference window
    hop_s: float = 0.1
    frame_s: float = 0.1  # SPL curve framing
    frame_hop_s: float = 0.1
    eps: float = 1e-8

    @property
    def stft(self) -> StftConfig:
        return StftConfig(self.sample_rate, self.window_len, self.hop_len, self.fft_size)

    def merged(self, **overrides) -> "RunConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_config(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _TYPES:
            raise ValueError(f"{source}:{lineno}: unknown key {key!r}")
        cast = int if _TYPES[key] in ("int", int) else float
        try:
            values[key] = cast(raw)
        except ValueError:
            raise ValueError(f"{source}:{lineno}: bad value {raw!r} for {key}") from None
    return values


def load_config(path=None, **overrides) -> RunConfig:
    base = RunConfig()
    if path is not None:
        base = base.merged(**parse_config(Path(path).read_text(), str(path)))
    cfg = base.merged(**overrides)
    cfg.stft  # validates
    return cfg
