"""Command-line entry point: ``binauralkit <command> ...``.

Failures print one line ``error:<category>: <detail>`` to stderr and exit
nonzero; outputs are written atomically so a failed run leaves no file.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness, metrics
from .binaural import StereoWaveform, mix_to_mono
from .config import load_config
from .curves import emit_curve
from .harness import FileMaskProvider, MaskProviderError, OracleProvider, ZeroDifferenceProvider
from .maskfile import MaskFileError, write_mask_file
from .spectral import istft, resample, stft
from .wavio import Encoding, WavFormatError, read_wav, write_wav
from ._atomic import atomic_write

EXIT_CODES = {
    "check-failed": 1,
    "invalid-argument": 2,
    "parse-error": 3,
    "io-error": 4,
    "provider-error": 5,
}


class CliError(Exception):
    def __init__(self, category: str, detail: str):
        super().__init__(detail)
        self.category = category


def _note(msg: str):
    print(f"note: {msg}", file=sys.stderr)


def _at_rate(audio, rate: int, path: str):
    if audio.sample_rate == rate:
        return audio
    _note(f"resampling {path} from {audio.sample_rate} Hz to {rate} Hz")
    if isinstance(audio, StereoWaveform):
        return StereoWaveform(resample(audio.left, rate), resample(audio.right, rate))
    return resample(audio, rate)


def _load(path: str, rate: int, want: str):
    audio = _at_rate(read_wav(path), rate, path)
    if want == "stereo" and not isinstance(audio, StereoWaveform):
        raise CliError("invalid-argument", f"{path} is mono; a 2-channel file is required")
    if want == "mono" and isinstance(audio, StereoWaveform):
        raise CliError("invalid-argument", f"{path} is stereo; a 1-channel file is required")
    return audio


def _save(path: str, audio, encoding: str):
    desc = write_wav(path, audio, encoding)
    if desc.clipped:
        _note(f"{desc.clipped} samples clamped while writing {path}")
    return desc


def _run_config(args):
    return load_config(
        getattr(args, "config", None),
        sample_rate=getattr(args, "sample_rate", None),
        window_len=getattr(args, "window_len", None),
        hop_len=getattr(args, "hop_len", None),
        fft_size=getattr(args, "fft_size", None),
        window_s=getattr(args, "window_s", None),
        hop_s=getattr(args, "hop_s", None),
        frame_s=getattr(args, "frame", None),
        frame_hop_s=getattr(args, "hop", None),
    )


def cmd_mix(args):
    stereo = read_wav(args.input)
    if not isinstance(stereo, StereoWaveform):
        raise CliError("invalid-argument", f"{args.input} is mono; a 2-channel file is required")
    _save(args.output, mix_to_mono(stereo), args.encoding)
    return 0


def _provider(args, cfg):
    if args.provider == "zero":
        return ZeroDifferenceProvider()
    if args.provider == "oracle":
        if not args.truth:
            raise CliError("invalid-argument", "--provider oracle requires --truth <stereo.wav>")
        return OracleProvider(_load(args.truth, cfg.sample_rate, "stereo"), cfg.eps)
    if not args.masks:
        raise CliError("invalid-argument", "--provider file requires --masks <path>")
    return FileMaskProvider(args.masks)


def cmd_binauralize(args):
    cfg = _run_config(args)
    mono = _load(args.input, cfg.sample_rate, "mono")
    provider = _provider(args, cfg)
    out = harness.binauralize(
        mono, provider, cfg.stft, cfg.window_s, cfg.hop_s, max_workers=args.workers
    )
    _save(args.output, out, args.encoding)
    return 0


def cmd_export_masks(args):
    cfg = _run_config(args)
    mono = _load(args.input, cfg.sample_rate, "mono")
    truth = _load(args.truth, cfg.sample_rate, "stereo")
    plan, masks = harness.oracle_masks(mono, truth, cfg.stft, cfg.window_s, cfg.hop_s, cfg.eps)
    write_mask_file(args.output, masks, cfg.stft, plan.window_len, plan.hop)
    return 0


def cmd_evaluate(args):
    cfg = _run_config(args)
    real = _load(args.real, cfg.sample_rate, "stereo")
    pred = _load(args.pred, cfg.sample_rate, "stereo")
    report = metrics.evaluate_all(real, pred, cfg.stft, cfg.frame_s, cfg.frame_hop_s)
    d = report.to_dict()
    for key, value in d.items():
        if key == "flags":
            value = ",".join(value) or "-"
        print(f"{key}={value}")
    if args.json:
        atomic_write(args.json, (json.dumps(d, indent=1) + "\n").encode())
    return 0


def cmd_curves(args):
    cfg = _run_config(args)
    stereo = _load(args.input, cfg.sample_rate, "stereo")
    curve = metrics.spl_curve(stereo, cfg.frame_s, cfg.frame_hop_s)
    fmt = args.format or ("json" if args.output.lower().endswith(".json") else "csv")
    emit_curve(curve, fmt, args.output)
    return 0


def cmd_roundtrip_check(args):
    cfg = _run_config(args)
    audio = _at_rate(read_wav(args.input), cfg.sample_rate, args.input)
    stft_cfg = cfg.stft
    channels = [audio.left, audio.right] if isinstance(audio, StereoWaveform) else [audio]
    ok = True

    def report(name, value, limit):
        nonlocal ok
        passed = value < limit
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}: {value:.3e} (limit {limit:g})")

    w = stft_cfg.window_len
    for i, ch in enumerate(channels):
        if len(ch) < 3 * w:
            raise CliError("invalid-argument", f"{args.input} too short for the round-trip check")
        rec = istft(stft(ch, stft_cfg), len(ch)).samples
        ref = ch.samples[w:-w]
        denom = np.sqrt(np.mean(ref**2)) or 1.0
        err = np.sqrt(np.mean((rec[w:-w] - ref) ** 2)) / denom
        report(f"stft_roundtrip[ch{i}] interior relative RMS", err, 1e-6)

    window_samples = int(round(cfg.window_s * cfg.sample_rate))
    if len(channels[0]) < window_samples:
        print(f"SKIP pipeline checks: shorter than one {cfg.window_s} s window")
        return 0 if ok else 1
    if isinstance(audio, StereoWaveform):
        mono = mix_to_mono(audio)
        out = harness.binauralize(mono, OracleProvider(audio, cfg.eps), stft_cfg, cfg.window_s, cfg.hop_s)
        for name, a, b in (("left", audio.left, out.left), ("right", audio.right, out.right)):
            ref = a.samples[w:-w]
            denom = np.sqrt(np.mean(ref**2)) or 1.0
            err = np.sqrt(np.mean((b.samples[w:-w] - ref) ** 2)) / denom
            report(f"oracle_pipeline[{name}] interior relative RMS", err, 1e-4)
    else:
        out = harness.binauralize(audio, ZeroDifferenceProvider(), stft_cfg, cfg.window_s, cfg.hop_s)
        err = float(np.max(np.abs(mix_to_mono(out).samples - audio.samples)))
        report("zero_provider mix identity max abs error", err, 1e-12)
    return 0 if ok else 1


def _add_stft_flags(p):
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--sample-rate", type=int)
    p.add_argument("--window-len", type=int, help="STFT window, samples")
    p.add_argument("--hop-len", type=int, help="STFT hop, samples")
    p.add_argument("--fft-size", type=int)


def _add_encoding(p):
    p.add_argument("--encoding", choices=[e.value for e in Encoding], default="float32")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_CODES["invalid-argument"], f"error:invalid-argument: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="binauralkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mix", help="sum a stereo file into mono (L + R)")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    _add_encoding(p)
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("binauralize", help="mono to stereo through a mask provider")
    p.add_argument("input")
    p.add_argument("--provider", choices=["oracle", "zero", "file"], required=True)
    p.add_argument("--truth", help="ground-truth stereo for the oracle provider")
    p.add_argument("--masks", help="mask container for the file provider")
    p.add_argument("--window-s", type=float, help="sliding window length, seconds")
    p.add_argument("--hop-s", type=float, help="sliding window hop, seconds")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    _add_encoding(p)
    _add_stft_flags(p)
    p.set_defaults(func=cmd_binauralize)

    p = sub.add_parser("export-masks", help="write oracle masks to a mask container")
    p.add_argument("input", help="mono wav")
    p.add_argument("--truth", required=True)
    p.add_argument("--window-s", type=float)
    p.add_argument("--hop-s", type=float)
    p.add_argument("-o", "--output", required=True)
    _add_stft_flags(p)
    p.set_defaults(func=cmd_export_masks)

    p = sub.add_parser("evaluate", help="all six metrics of pred against real")
    p.add_argument("real")
    p.add_argument("pred")
    p.add_argument("--json", help="also write the report as JSON")
    p.add_argument("--frame", type=float, help="SPL frame length, seconds")
    p.add_argument("--hop", type=float, help="SPL frame hop, seconds")
    _add_stft_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("curves", help="per-frame SPL difference curve")
    p.add_argument("input")
    p.add_argument("--frame", type=float)
    p.add_argument("--hop", type=float)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--config")
    p.add_argument("--sample-rate", type=int)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("roundtrip-check", help="STFT and pipeline self-tests on a file")
    p.add_argument("input")
    p.add_argument("--window-s", type=float)
    p.add_argument("--hop-s", type=float)
    _add_stft_flags(p)
    p.set_defaults(func=cmd_roundtrip_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        category, detail = exc.category, str(exc)
    except (WavFormatError, MaskFileError) as exc:
        category, detail = "parse-error", str(exc)
    except MaskProviderError as exc:
        category, detail = "provider-error", str(exc)
    except OSError as exc:
        category, detail = "io-error", f"{exc.strerror or exc}: {exc.filename or ''}".rstrip(": ")
    except ValueError as exc:
        category, detail = "invalid-argument", str(exc)
    detail = " ".join(detail.split())
    print(f"error:{category}: {detail}", file=sys.stderr)
    return EXIT_CODES[category]


if __name__ == "__main__":
    sys.exit(main())
