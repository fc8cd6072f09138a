"""Birth / no-birth phase diagram from |E> on the default 120x120 grid.

Runs the sweep, then prints the region counts, the E-flagged columns, the
accelerated boundary at omega L = 3/2 and the wall-clock time.
"""
import argparse
import csv
import os
import time
from collections import Counter
from pathlib import Path

from unruh_entanglement import cli


def _rows(path: Path) -> list[dict]:
    with open(path) as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/phase/phase.csv"))
    ap.add_argument("--threads", type=int, default=os.cpu_count())
    ap.add_argument("--grid", default="0.025:3:120", help="omega L start:stop:count")
    ap.add_argument("--a-range", default="0.02:20:120", help="a/omega start:stop:count (log)")
    args = ap.parse_args()

    t0 = time.perf_counter()
    code = cli.main(["sweep", "--mode", "phase", "--omega-L-range", args.grid, "--a-range", args.a_range,
                     "--threads", str(args.threads), "--out", str(args.out)])
    if code:
        raise SystemExit(code)
    elapsed = time.perf_counter() - t0

    rows = _rows(args.out)
    print("regions:", dict(sorted(Counter(r["region"] for r in rows).items())))
    e_cols = sorted({float(r["omega_L"]) for r in rows if r["region"].endswith("+E")})
    print("E-flagged omega L:", ", ".join(f"{x:g}" for x in e_cols) or "none")
    for b in _rows(args.out.with_name(args.out.stem + "_boundary.csv")):
        if b["env"] == "accel" and abs(float(b["omega_L"]) - 1.5) < 1e-9:
            print(f"accelerated boundary at omega L = 1.5: a/omega = {float(b['a_over_omega_threshold']):.4f}")
    print(f"elapsed {elapsed:.1f} s with {args.threads} workers")


if __name__ == "__main__":
    main()
