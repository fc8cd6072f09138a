"""Maximum concurrence from |E> versus a/omega, accelerated and thermal.

Scans omega L in {1/2, 3/2} (override with --omega-L) and reports where the
accelerated maximum exceeds its a -> 0 (inertial) value.
"""
import argparse
import json
import os
from pathlib import Path

from unruh_entanglement import cli


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/maxc/maxc.csv"))
    ap.add_argument("--omega-L", default="0.5,1.5")
    ap.add_argument("--a-range", default="0.01:5:100", help="a/omega start:stop:count (log)")
    ap.add_argument("--threads", type=int, default=os.cpu_count())
    args = ap.parse_args()

    code = cli.main(["sweep", "--mode", "maxc", "--omega-L-list", args.omega_L, "--a-range", args.a_range,
                     "--threads", str(args.threads), "--out", str(args.out)])
    if code:
        raise SystemExit(code)
    manifest = json.loads(args.out.with_name(args.out.stem + ".manifest.json").read_text())
    for wl, e in manifest["enhancement"].items():
        verdict = "exceeds" if e["exceeds_inertial"] else "does not exceed"
        print(f"omega L = {wl}: best C_max {e['best_cmax_accel']:.5f} at a/omega = {e['best_a_over_omega']:.4g} "
              f"{verdict} the inertial {e['inertial_cmax']:.5f}")


if __name__ == "__main__":
    main()
