"""Parameter sweeps over separation and acceleration for atoms starting in |E>.

Each grid cell asks whether entanglement is ever born for accelerated atoms,
for static atoms in a bath at the matching Unruh temperature, and for inertial
atoms in the vacuum. Cells are independent; columns of fixed ``omega L`` are
mapped over a process pool and reassembled in input order, so results do not
depend on the worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .dynamics import IntegratorConfig, evolve
from .entanglement import detect_events
from .params import Environment, PhysicalParams, PopulationState

BIRTH_THRESHOLD = 1e-6
HORIZON = 40.0
EXTENDED_HORIZON = 80.0
SAMPLES_PER_UNIT = 20
GAMMA0 = 1e-3  # drops out once time is measured in 1/gamma0


@dataclass(frozen=True)
class SweepSettings:
    threshold: float = BIRTH_THRESHOLD
    horizon: float = HORIZON
    extended_horizon: float = EXTENDED_HORIZON
    samples_per_unit: int = SAMPLES_PER_UNIT


DEFAULT_SETTINGS = SweepSettings()


@dataclass(frozen=True)
class PhaseCell:
    """Birth verdicts at one ``(omega L, a/omega)`` point.

    ``region`` partitions the plane by the accelerated and thermal verdicts
    (A: both, B: accelerated only, C: thermal only, D: neither); ``e_flag``
    marks accelerated births that the inertial vacuum does not produce.
    """

    omega_L: float
    a_over_omega: float
    accel_births: bool
    thermal_births: bool
    inertial_births: bool
    error: str | None = None

    @property
    def region(self) -> str:
        if self.accel_births:
            return "A" if self.thermal_births else "B"
        return "C" if self.thermal_births else "D"

    @property
    def e_flag(self) -> bool:
        return self.accel_births and not self.inertial_births

    @property
    def region_label(self) -> str:
        return self.region + ("+E" if self.e_flag else "")


def _params(omega_L: float, a_over_omega: float) -> PhysicalParams:
    return PhysicalParams(omega=1.0, accel=a_over_omega, separation=omega_L, gamma0=GAMMA0)


def max_concurrence_from_E(p: PhysicalParams, env: Environment, settings: SweepSettings = DEFAULT_SETTINGS) -> float:
    """Largest concurrence reached from ``|E>`` within the horizon (0 if never above threshold).

    If ``K`` is still rising at the horizon the run is repeated once with the
    extended horizon.
    """
    horizon = settings.horizon
    while True:
        cfg = IntegratorConfig(
            method="exact", t_max=horizon, samples=int(round(horizon * settings.samples_per_unit)) + 1
        )
        traj = evolve(PopulationState.excited(), p, env, cfg)
        k = traj.k_values
        if horizon < settings.extended_horizon and k[-1] > k[-2]:
            horizon = settings.extended_horizon
            continue
        return detect_events(traj, threshold=settings.threshold).max_concurrence


def birth_possible(
    p: PhysicalParams, env: Environment, horizon: float = HORIZON, threshold: float = BIRTH_THRESHOLD
) -> bool:
    """Does concurrence ever exceed ``threshold`` when starting from ``|E>``?"""
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    settings = SweepSettings(
        threshold=threshold, horizon=horizon, extended_horizon=max(EXTENDED_HORIZON, 2 * horizon)
    )
    return max_concurrence_from_E(p, env, settings) > threshold


def _cell_verdicts(omega_L: float, a: float, settings: SweepSettings) -> tuple[bool, bool]:
    p = _params(omega_L, a)
    accel = max_concurrence_from_E(p, Environment.accelerated(), settings) > settings.threshold
    thermal = max_concurrence_from_E(p, Environment.thermal_at_unruh(p), settings) > settings.threshold
    return accel, thermal


def _column(args: tuple[float, tuple[float, ...], SweepSettings]) -> list[PhaseCell]:
    omega_L, a_values, settings = args
    try:
        inertial = (
            max_concurrence_from_E(_params(omega_L, 0.0), Environment.inertial(), settings) > settings.threshold
        )
    except Exception as exc:  # recorded per cell, sweep continues
        return [PhaseCell(omega_L, a, False, False, False, error=f"inertial: {exc}") for a in a_values]
    cells = []
    for a in a_values:
        try:
            accel, thermal = _cell_verdicts(omega_L, a, settings)
            cells.append(PhaseCell(omega_L, a, accel, thermal, inertial))
        except Exception as exc:
            cells.append(PhaseCell(omega_L, a, False, False, inertial, error=str(exc)))
    return cells


def _map(fn, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class PhaseGrid:
    """``omega L`` linear in ``[L_min, L_max]``, ``a/omega`` logarithmic in ``[a_min, a_max]``."""

    omega_L_min: float = 0.025
    omega_L_max: float = 3.0
    n_omega_L: int = 120
    a_min: float = 0.02
    a_max: float = 20.0
    n_a: int = 120

    def __post_init__(self) -> None:
        if self.n_omega_L < 1 or self.n_a < 1:
            raise ValueError("grid must be non-empty")
        if not (0 < self.omega_L_min <= self.omega_L_max and 0 < self.a_min <= self.a_max):
            raise ValueError("grid ranges must be positive and ordered")

    def omega_L_values(self) -> np.ndarray:
        return np.linspace(self.omega_L_min, self.omega_L_max, self.n_omega_L)

    def a_values(self) -> np.ndarray:
        return np.geomspace(self.a_min, self.a_max, self.n_a)

    def refined(self) -> "PhaseGrid":
        return PhaseGrid(
            self.omega_L_min, self.omega_L_max, 2 * self.n_omega_L - 1, self.a_min, self.a_max, 2 * self.n_a - 1
        )


def phase_diagram(
    grid: PhaseGrid | None = None,
    omega_L_values: Iterable[float] | None = None,
    a_values: Iterable[float] | None = None,
    workers: int = 1,
    settings: SweepSettings = DEFAULT_SETTINGS,
) -> list[PhaseCell]:
    """Classify every grid point; cells are ordered by ``omega L`` then ``a``.

    Either pass a :class:`PhaseGrid` or explicit value lists.
    """
    grid = grid or PhaseGrid()
    Ls = grid.omega_L_values() if omega_L_values is None else np.asarray(list(omega_L_values), dtype=float)
    As = grid.a_values() if a_values is None else np.asarray(list(a_values), dtype=float)
    if Ls.size == 0 or As.size == 0:
        raise ValueError("grid must be non-empty")
    a_tuple = tuple(float(a) for a in As)
    columns = _map(_column, [(float(L), a_tuple, settings) for L in Ls], workers)
    return [cell for col in columns for cell in col]


def birth_threshold(
    omega_L: float,
    env_kind: str,
    a_birth: float,
    a_none: float,
    rtol: float = 1e-3,
    settings: SweepSettings = DEFAULT_SETTINGS,
) -> float:
    """Bisect in ``a/omega`` between a birth point and a no-birth point.

    ``env_kind`` is ``"accel"`` or ``"thermal"`` (bath at the Unruh temperature).
    Bisection is geometric and stops when the bracket is within ``rtol``.
    """

    def births(a: float) -> bool:
        p = _params(omega_L, a)
        env = Environment.accelerated() if env_kind == "accel" else Environment.thermal_at_unruh(p)
        return max_concurrence_from_E(p, env, settings) > settings.threshold

    lo, hi = a_birth, a_none
    if not births(lo) or births(hi):
        raise ValueError(f"[{lo}, {hi}] does not bracket the birth boundary at omega L = {omega_L}")
    while abs(hi - lo) > rtol * min(lo, hi):
        mid = math.sqrt(lo * hi)
        if births(mid):
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


@dataclass(frozen=True)
class BoundaryPoint:
    omega_L: float
    env: str
    a_threshold: float | None  # None: no birth anywhere in the column


def boundary_curve(
    cells: Sequence[PhaseCell], rtol: float = 1e-3, settings: SweepSettings = DEFAULT_SETTINGS
) -> list[BoundaryPoint]:
    """Upper acceleration bound for birth per column, refined by bisection."""
    out: list[BoundaryPoint] = []
    by_col: dict[float, list[PhaseCell]] = {}
    for c in cells:
        by_col.setdefault(c.omega_L, []).append(c)
    for L, col in by_col.items():
        col = sorted(col, key=lambda c: c.a_over_omega)
        for env, attr in (("accel", "accel_births"), ("thermal", "thermal_births")):
            flags = [getattr(c, attr) for c in col]
            if not any(flags):
                out.append(BoundaryPoint(L, env, None))
                continue
            last = max(i for i, f in enumerate(flags) if f)
            if last == len(col) - 1:
                out.append(BoundaryPoint(L, env, math.inf))
                continue
            a_th = birth_threshold(L, env, col[last].a_over_omega, col[last + 1].a_over_omega, rtol, settings)
            out.append(BoundaryPoint(L, env, a_th))
    return out


@dataclass(frozen=True)
class MaxConcurrencePoint:
    a_over_omega: float
    accel: float
    thermal: float


def _maxc_point(args: tuple[float, float, SweepSettings]) -> MaxConcurrencePoint:
    omega_L, a, settings = args
    p = _params(omega_L, a)
    return MaxConcurrencePoint(
        a_over_omega=a,
        accel=max_concurrence_from_E(p, Environment.accelerated(), settings),
        thermal=max_concurrence_from_E(p, Environment.thermal_at_unruh(p), settings),
    )


def max_concurrence_curve(
    omega_L: float, a_range: Iterable[float], workers: int = 1, settings: SweepSettings = DEFAULT_SETTINGS
) -> list[MaxConcurrencePoint]:
    """Maximum concurrence from ``|E>`` versus ``a/omega`` for accelerated and thermal atoms."""
    a_vals = [float(a) for a in a_range]
    if any(a <= 0 for a in a_vals):
        raise ValueError("a_range must be positive")
    return _map(_maxc_point, [(float(omega_L), a, settings) for a in a_vals], workers)


@dataclass(frozen=True)
class Enhancement:
    """A point where accelerated atoms end up more entangled than inertial ones."""

    omega_L: float
    a_over_omega: float
    c_max_accel: float
    c_max_inertial: float


def inertial_max_concurrence(omega_L: float, settings: SweepSettings = DEFAULT_SETTINGS) -> float:
    return max_concurrence_from_E(_params(omega_L, 0.0), Environment.inertial(), settings)


def find_enhancement(
    omega_L_values: Iterable[float], a_range: Iterable[float], settings: SweepSettings = DEFAULT_SETTINGS
) -> Enhancement | None:
    """Scan for the largest accelerated ``C_max`` exceeding its ``a -> 0`` value."""
    best: Enhancement | None = None
    a_vals = list(a_range)
    for L in omega_L_values:
        ref = inertial_max_concurrence(L, settings)
        for pt in max_concurrence_curve(L, a_vals, settings=settings):
            if pt.accel > ref and (best is None or pt.accel - ref > best.c_max_accel - best.c_max_inertial):
                best = Enhancement(float(L), pt.a_over_omega, pt.accel, ref)
    return best


@dataclass
class PhaseSummary:
    """Structural facts about a phase diagram."""

    n_cells: int
    region_counts: dict[str, int] = field(default_factory=dict)
    n_e_flagged: int = 0
    n_errors: int = 0
    columns_without_upper_bound: list[float] = field(default_factory=list)


def summarize(cells: Sequence[PhaseCell]) -> PhaseSummary:
    summary = PhaseSummary(n_cells=len(cells))
    cols: dict[float, list[PhaseCell]] = {}
    for c in cells:
        summary.region_counts[c.region] = summary.region_counts.get(c.region, 0) + 1
        summary.n_e_flagged += c.e_flag
        summary.n_errors += c.error is not None
        cols.setdefault(c.omega_L, []).append(c)
    for L, col in cols.items():
        top = max(col, key=lambda c: c.a_over_omega)
        if top.accel_births:
            summary.columns_without_upper_bound.append(L)
    return summary
