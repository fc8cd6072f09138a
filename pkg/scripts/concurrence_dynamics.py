"""Concurrence versus time for accelerated and thermal atoms.

Writes one CSV (plus manifest and plot script) per panel:

* ``omegaL1_*``  |A> and |S> at omega L = 1, a/omega in {0.2, 2, 20}
* ``omegaL4_*``  |A> and |S> at omega L = 4, a/omega in {0.1, 1, 10}
* ``birth_*``    |E> at omega L in {1/2, 3/2}, a/omega in {0.1, 1, 6/5}
"""
import argparse
from pathlib import Path

from unruh_entanglement import cli

PANELS = [
    ("omegaL1", 1.0, ("A", "S"), (0.2, 2.0, 20.0), 10.0),
    ("omegaL4", 4.0, ("A", "S"), (0.1, 1.0, 10.0), 10.0),
    ("birth_omegaL0.5", 0.5, ("E",), (0.1, 1.0, 1.2), 40.0),
    ("birth_omegaL1.5", 1.5, ("E",), (0.1, 1.0, 1.2), 40.0),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=Path("results/dynamics"))
    ap.add_argument("--samples", type=int, default=801)
    args = ap.parse_args()
    for stem, wl, initials, accels, tmax in PANELS:
        for initial in initials:
            for a in accels:
                out = args.out_dir / f"{stem}_{initial}_a{a:g}.csv"
                code = cli.main(["evolve", "--initial", initial, "--a", str(a), "--L", str(wl), "--env", "all",
                                 "--tmax", str(tmax), "--samples", str(args.samples), "--out", str(out)])
                if code:
                    raise SystemExit(code)


if __name__ == "__main__":
    main()
