"""Write panned-sine stereo fixtures and their mono mixes as WAV files.

    python3 scripts/make_fixtures.py out_dir --count 5 --duration 2.0
"""
import argparse
from pathlib import Path

from binauralkit.binaural import mix_to_mono
from binauralkit.fixtures import oracle_fixtures
from binauralkit.wavio import write_wav


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--first-seed", type=int, default=0)
    ap.add_argument("--duration", type=float, default=2.0)
    ap.add_argument("--floor", type=float, default=1e-3, help="minimum mono bin magnitude")
    ap.add_argument("--encoding", choices=["float32", "pcm16"], default="float32")
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    for seed, truth in oracle_fixtures(args.count, args.first_seed, args.floor, duration=args.duration):
        stereo_path = args.out_dir / f"fixture{seed:03d}_stereo.wav"
        mono_path = args.out_dir / f"fixture{seed:03d}_mono.wav"
        write_wav(stereo_path, truth, args.encoding)
        write_wav(mono_path, mix_to_mono(truth), args.encoding)
        print(f"seed {seed}: {stereo_path.name}, {mono_path.name}")


if __name__ == "__main__":
    main()
