"""Compare the zero-difference baseline with oracle masks on one fixture.

Prints the metric report for each provider and writes the three left-minus-right SPL
curves (truth, zero, oracle) side by side to a CSV.

    python3 scripts/spatial_curve_demo.py --seed 3 -o curves.csv
"""
import argparse
import csv

from binauralkit.binaural import mix_to_mono
from binauralkit.fixtures import oracle_fixtures
from binauralkit.harness import OracleProvider, ZeroDifferenceProvider, binauralize
from binauralkit.metrics import evaluate_all, spl_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="first seed to try")
    ap.add_argument("--duration", type=float, default=3.0)
    ap.add_argument("-o", "--output", default="spatial_curves.csv")
    args = ap.parse_args()

    seed, truth = oracle_fixtures(1, args.seed, duration=args.duration)[0]
    mono = mix_to_mono(truth)
    preds = {
        "zero": binauralize(mono, ZeroDifferenceProvider()),
        "oracle": binauralize(mono, OracleProvider(truth)),
    }
    print(f"fixture seed {seed}, {truth.left.duration:.2f} s")
    for name, pred in preds.items():
        rep = evaluate_all(truth, pred).to_dict()
        print(name.ljust(7), " ".join(f"{k}={v:.4g}" for k, v in rep.items() if k != "flags"))

    curves = {"truth": spl_curve(truth)} | {k: spl_curve(v) for k, v in preds.items()}
    with open(args.output, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["time_s"] + [f"sd_spl_{k}" for k in curves])
        times = curves["truth"].frame_times
        for i, t in enumerate(times):
            out.writerow([f"{t:.3f}"] + [f"{c.values[i]:.6f}" for c in curves.values()])
    print(f"wrote {len(times)} frames to {args.output}")


if __name__ == "__main__":
    main()
