"""Command-line front end: ``unruh-ent {evolve, sweep, verify}``.

Every CSV starts with ``#`` comment lines naming its JSON manifest and the
integrator settings, followed by a header row. Numbers are written with 17
significant digits and a decimal point regardless of locale. Manifests carry a
timestamp; the CSVs do not, so identical invocations give byte-identical CSVs.

Exit codes: 0 success, 1 failed verification, 2 invalid arguments,
3 integrator failure.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .dynamics import IntegrationError, IntegratorConfig, evolve
from .entanglement import detect_events
from .params import Environment, PhysicalParams, PopulationState
from .sweep import (
    PhaseGrid,
    boundary_curve,
    inertial_max_concurrence,
    max_concurrence_curve,
    phase_diagram,
)
from .verify import format_report, run_checks

WORKERS_ENV = "UNRUH_ENT_MAX_WORKERS"
GAMMA0 = 1e-3

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INTEGRATOR = 3


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _sidecar(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def _write_csv(path: Path, header: Sequence[str], rows, comments: Sequence[str]) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out: Path, argv: Sequence[str], parameters: dict, outputs: Sequence[Path], extra=None) -> Path:
    manifest = {
        "tool": "unruh-ent",
        "version": __version__,
        "command": list(argv),
        "parameters": parameters,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    if extra:
        manifest.update(extra)
    path = _sidecar(out, ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def resolve_workers(requested: int | None) -> int:
    """Requested worker count, capped by ``$UNRUH_ENT_MAX_WORKERS`` when set."""
    n = requested if requested is not None else 1
    cap = os.environ.get(WORKERS_ENV)
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


# --- evolve -----------------------------------------------------------------------------

ENV_CHOICES = ("accel", "thermal", "inertial", "all")


def _parse_initial(text: str) -> PopulationState:
    if "," in text:
        parts = [float(v) for v in text.split(",")]
        if len(parts) != 4:
            raise ValueError("custom initial state needs four populations rho_G,rho_A,rho_S,rho_E")
        return PopulationState(*parts)
    return PopulationState.named(text)


def _environments(name: str, p: PhysicalParams) -> list[Environment]:
    table = {
        "accel": Environment.accelerated(),
        "thermal": Environment.thermal_at_unruh(p),
        "inertial": Environment.inertial(),
    }
    if name == "all":
        return [table["accel"], table["thermal"], table["inertial"]]
    return [table[name]]


EVOLVE_PLOT = '''"""Plot concurrence curves written by `unruh-ent evolve`."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
curves = {{}}
with open(path) as fh:
    rows = csv.DictReader(line for line in fh if not line.startswith("#"))
    for row in rows:
        t, c = curves.setdefault(row["env"], ([], []))
        t.append(float(row["tau_gamma0"]))
        c.append(float(row["concurrence"]))
for env, (t, c) in curves.items():
    plt.plot(t, c, label=env)
plt.xlabel(r"$\\tau\\Gamma_0$")
plt.ylabel("concurrence")
plt.title({title!r})
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def cmd_evolve(args: argparse.Namespace, argv: Sequence[str]) -> int:
    p = PhysicalParams(omega=1.0, accel=args.a, separation=args.L, gamma0=GAMMA0)
    initial = _parse_initial(args.initial)
    cfg = IntegratorConfig(method=args.method, rtol=args.rtol, atol=args.atol, step=args.step,
                           t_max=args.tmax, samples=args.samples)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    events = {}
    for env in _environments(args.env, p):
        traj = evolve(initial, p, env, cfg)
        k = traj.k_values
        c = traj.concurrence
        for i, t in enumerate(traj.times):
            rows.append((env.label, t, *traj.populations[i], k[i], c[i]))
        ev = detect_events(traj)
        events[env.label] = asdict(ev)
    manifest_name = _sidecar(out, ".manifest.json").name
    comments = [
        f"unruh-ent {__version__} evolve; manifest: {manifest_name}",
        f"a/omega={_fmt(args.a)} omega*L={_fmt(args.L)} initial={args.initial}",
        f"integrator: method={cfg.method} rtol={cfg.rtol:g} atol={cfg.atol:g} step={cfg.step:g}",
    ]
    header = ["env", "tau_gamma0", "rho_G", "rho_A", "rho_S", "rho_E", "K", "concurrence"]
    _write_csv(out, header, rows, comments)
    plot = _sidecar(out, ".plot.py")
    plot.write_text(EVOLVE_PLOT.format(csv=out.name, title=f"a/omega={args.a:g}, omega L={args.L:g}, |{args.initial}>"))
    params = {"a_over_omega": args.a, "omega_L": args.L, "initial": args.initial, "env": args.env,
              "gamma0_over_omega": GAMMA0, "integrator": asdict(cfg)}
    _write_manifest(out, argv, params, [out, plot], {"events": events})
    print(f"wrote {out}")
    return 0


# --- sweep ------------------------------------------------------------------------------

PHASE_PLOT = '''"""Plot a phase diagram written by `unruh-ent sweep --mode phase`."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
colors = {{"A": "tab:green", "B": "tab:blue", "C": "tab:orange", "D": "lightgray"}}
with open(path) as fh:
    rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
for region, color in colors.items():
    pts = [r for r in rows if r["region"].split("+")[0] == region]
    plt.scatter([float(r["omega_L"]) for r in pts], [float(r["a_over_omega"]) for r in pts],
                s=4, c=color, label=region, marker="s")
e_pts = [r for r in rows if r["region"].endswith("+E")]
plt.scatter([float(r["omega_L"]) for r in e_pts], [float(r["a_over_omega"]) for r in e_pts],
            s=6, facecolors="none", edgecolors="k", label="E")
plt.yscale("log")
plt.xlabel(r"$\\omega L$")
plt.ylabel(r"$a/\\omega$")
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''

MAXC_PLOT = '''"""Plot maximum-concurrence curves written by `unruh-ent sweep --mode maxc`."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
with open(path) as fh:
    rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
for wl in sorted({{r["omega_L"] for r in rows}}, key=float):
    sel = [r for r in rows if r["omega_L"] == wl]
    a = [float(r["a_over_omega"]) for r in sel]
    plt.plot(a, [float(r["cmax_accel"]) for r in sel], "-", label=f"accelerated, wL={{float(wl):g}}")
    plt.plot(a, [float(r["cmax_thermal"]) for r in sel], "--", label=f"thermal, wL={{float(wl):g}}")
plt.xlabel(r"$a/\\omega$")
plt.ylabel(r"$C_{{max}}$")
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def _parse_range(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}") from None


def _parse_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_sweep(args: argparse.Namespace, argv: Sequence[str]) -> int:
    workers = resolve_workers(args.threads)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    manifest_name = _sidecar(out, ".manifest.json").name
    if args.mode == "phase":
        L_lo, L_hi, nL = args.omega_L_range
        a_lo, a_hi, na = args.a_range
        grid = PhaseGrid(L_lo, L_hi, nL, a_lo, a_hi, na)
        cells = phase_diagram(grid, workers=workers)
        comments = [f"unruh-ent {__version__} sweep phase; manifest: {manifest_name}",
                    f"grid: omega_L linear {L_lo:g}:{L_hi:g}:{nL}, a/omega log {a_lo:g}:{a_hi:g}:{na}",
                    "birth threshold 1e-06, horizon 40 (80 if K still rising), initial |E>"]
        rows = [(c.omega_L, c.a_over_omega, c.accel_births, c.thermal_births, c.inertial_births, c.region_label,
                 "ok" if c.error is None else f"failed: {c.error}".replace(",", ";")) for c in cells]
        _write_csv(out, ["omega_L", "a_over_omega", "accel", "thermal", "inertial", "region", "status"], rows, comments)
        outputs = [out]
        if not args.no_boundary:
            bpath = _sidecar(out, "_boundary.csv")
            bpts = boundary_curve(cells, rtol=args.boundary_rtol)
            brows = [(b.omega_L, b.env, "none" if b.a_threshold is None else b.a_threshold) for b in bpts]
            _write_csv(bpath, ["omega_L", "env", "a_over_omega_threshold"], brows,
                       [f"unruh-ent {__version__} sweep phase boundary; manifest: {manifest_name}"])
            outputs.append(bpath)
        plot = _sidecar(out, ".plot.py")
        plot.write_text(PHASE_PLOT.format(csv=out.name))
        outputs.append(plot)
        params = {"mode": "phase", "grid": asdict(grid), "workers": workers}
        _write_manifest(out, argv, params, outputs)
    else:
        a_lo, a_hi, na = args.a_range
        a_vals = np.geomspace(a_lo, a_hi, na)
        rows = []
        enhancements = {}
        for wl in args.omega_L_list:
            ref = inertial_max_concurrence(wl)
            curve = max_concurrence_curve(wl, a_vals, workers=workers)
            rows.extend((wl, pt.a_over_omega, pt.accel, pt.thermal) for pt in curve)
            best = max(curve, key=lambda pt: pt.accel)
            enhancements[f"{wl:g}"] = {"inertial_cmax": ref, "best_a_over_omega": best.a_over_omega,
                                       "best_cmax_accel": best.accel, "exceeds_inertial": best.accel > ref}
        comments = [f"unruh-ent {__version__} sweep maxc; manifest: {manifest_name}",
                    "birth threshold 1e-06, horizon 40 (80 if K still rising), initial |E>"]
        _write_csv(out, ["omega_L", "a_over_omega", "cmax_accel", "cmax_thermal"], rows, comments)
        plot = _sidecar(out, ".plot.py")
        plot.write_text(MAXC_PLOT.format(csv=out.name))
        params = {"mode": "maxc", "omega_L": args.omega_L_list, "a_range": [a_lo, a_hi, na], "workers": workers}
        _write_manifest(out, argv, params, [out, plot], {"enhancement": enhancements})
    print(f"wrote {out}")
    return 0


def cmd_verify(args: argparse.Namespace, argv: Sequence[str]) -> int:
    results = run_checks(quick=args.quick)
    print(format_report(results))
    return 0 if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unruh-ent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evolve", help="population and concurrence dynamics")
    ev.add_argument("--initial", default="A", help="A, S, E, G, mixed, or rho_G,rho_A,rho_S,rho_E")
    ev.add_argument("--a", type=float, required=True, help="a/omega")
    ev.add_argument("--L", type=float, required=True, help="omega*L")
    ev.add_argument("--env", choices=ENV_CHOICES, default="all")
    ev.add_argument("--tmax", type=float, default=10.0, help="final tau*gamma0")
    ev.add_argument("--samples", type=int, default=1001)
    ev.add_argument("--method", choices=("adaptive_rk45", "fixed_rk4", "exact"), default="adaptive_rk45")
    ev.add_argument("--rtol", type=float, default=1e-9)
    ev.add_argument("--atol", type=float, default=1e-12)
    ev.add_argument("--step", type=float, default=1e-3, help="fixed_rk4 step in tau*gamma0")
    ev.add_argument("--out", default="evolve.csv")
    ev.set_defaults(func=cmd_evolve)

    sw = sub.add_parser("sweep", help="phase diagram or maximum-concurrence curves from |E>")
    sw.add_argument("--mode", choices=("phase", "maxc"), required=True)
    sw.add_argument("--omega-L-range", type=_parse_range, default=(0.025, 3.0, 120),
                    help="phase mode: start:stop:count, linear")
    sw.add_argument("--omega-L-list", type=_parse_list, default=[0.5, 1.5], help="maxc mode: comma list")
    sw.add_argument("--a-range", type=_parse_range, default=None, help="start:stop:count, logarithmic")
    sw.add_argument("--threads", type=int, default=None, help=f"worker processes (capped by ${WORKERS_ENV})")
    sw.add_argument("--boundary-rtol", type=float, default=1e-3)
    sw.add_argument("--no-boundary", action="store_true", help="skip boundary bisection")
    sw.add_argument("--out", default="sweep.csv")
    sw.set_defaults(func=cmd_sweep)

    ve = sub.add_parser("verify", help="run the oracle self-checks")
    ve.add_argument("--quick", action="store_true", help="skip the Fourier quadrature checks")
    ve.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "a_range", "unset") is None:
        args.a_range = (0.02, 20.0, 120) if args.mode == "phase" else (0.01, 5.0, 60)
    try:
        return args.func(args, ["unruh-ent", *argv])
    except IntegrationError as exc:
        print(f"unruh-ent: integrator failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR
    except ValueError as exc:
        print(f"unruh-ent: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
