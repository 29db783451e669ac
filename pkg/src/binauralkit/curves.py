"""CSV/JSON serialization of spatial curves (time, SPL difference, direction)."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from ._atomic import atomic_write
from .metrics import SpatialCurve, direction

CSV_HEADER = ("time_s", "sd_spl_db", "direction")


def _round9(x: float) -> float:
    return float(f"{x:.9g}")


def curve_rows(curve: SpatialCurve) -> list[dict]:
    return [
        {"time_s": _round9(t), "sd_spl_db": _round9(v), "direction": direction(v).value}
        for t, v in zip(curve.frame_times, curve.values)
    ]


def emit_curve(curve: SpatialCurve, fmt: str, path) -> None:
    fmt = fmt.lower()
    rows = curve_rows(curve)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([repr(row["time_s"]), repr(row["sd_spl_db"]), row["direction"]])
        data = buf.getvalue()
    elif fmt == "json":
        data = json.dumps({"frames": rows}, indent=1) + "\n"
    else:
        raise ValueError(f"unknown curve format {fmt!r}; expected csv or json")
    atomic_write(path, data.encode())


def read_curve_json(path) -> SpatialCurve:
    rows = json.loads(Path(path).read_text())["frames"]
    return SpatialCurve([r["time_s"] for r in rows], [r["sd_spl_db"] for r in rows])


def read_curve_csv(path) -> SpatialCurve:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header {reader.fieldnames}")
        rows = list(reader)
    return SpatialCurve([float(r["time_s"]) for r in rows], [float(r["sd_spl_db"]) for r in rows])
