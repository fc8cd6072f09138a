"""Population rate equations in the coupled basis and their time integration.

Time is measured in units of ``1/gamma0`` throughout: coefficients are divided
by ``gamma0`` before integration, so ``Trajectory.times`` holds ``tau * gamma0``.

Three integrators share one contract:

``adaptive_rk45``
    Dormand-Prince 5(4) with error control; steps are clipped to land on every
    output time, so samples carry no interpolation error.
``fixed_rk4``
    Classical RK4 with (at most) ``step`` between substeps.
``exact``
    The equations are linear with constant coefficients, so the propagator is
    a 4x4 matrix exponential. Eigendecomposition is used when the spectrum is
    well separated, scaling-and-squaring otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.linalg import expm

from .coefficients import DissipatorCoefficients, dissipator_coefficients
from .entanglement import concurrence_from_populations, k_from_populations
from .params import Environment, PhysicalParams, PopulationState

Method = Literal["adaptive_rk45", "fixed_rk4", "exact"]

DEGENERACY_RTOL = 1e-8
EIGVEC_COND_MAX = 1e8


class IntegrationError(RuntimeError):
    """Adaptive stepping gave up; ``time_reached`` is the last accepted time."""

    def __init__(self, message: str, time_reached: float):
        super().__init__(f"{message} at tau*gamma0 = {time_reached:.6g}")
        self.time_reached = time_reached


def generator_matrix(c: DissipatorCoefficients) -> np.ndarray:
    """Matrix ``M`` with ``d/dtau (rho_G, rho_A, rho_S, rho_E) = M @ rho``."""
    a1, a2, b1, b2 = c.as_tuple()
    down_a = 2 * (a1 + b1 - a2 - b2)  # A -> G and E -> A
    down_s = 2 * (a1 + b1 + a2 + b2)  # S -> G and E -> S
    up_a = 2 * (a1 - b1 - a2 + b2)  # G -> A and A -> E
    up_s = 2 * (a1 - b1 + a2 - b2)  # G -> S and S -> E
    return np.array(
        [
            [-4 * (a1 - b1), down_a, down_s, 0.0],
            [up_a, -4 * (a1 - a2), 0.0, down_a],
            [up_s, 0.0, -4 * (a1 + a2), down_s],
            [0.0, up_a, up_s, -4 * (a1 + b1)],
        ]
    )


def population_rhs(c: DissipatorCoefficients, s) -> np.ndarray:
    """Time derivatives of ``(rho_G, rho_A, rho_S, rho_E)``; they always sum to zero."""
    a1, a2, b1, b2 = c.as_tuple()
    g, a, sym, e = s.as_array() if isinstance(s, PopulationState) else np.asarray(s, dtype=float)
    return np.array(
        [
            -4 * (a1 - b1) * g + 2 * (a1 + b1 - a2 - b2) * a + 2 * (a1 + b1 + a2 + b2) * sym,
            -4 * (a1 - a2) * a + 2 * (a1 - b1 - a2 + b2) * g + 2 * (a1 + b1 - a2 - b2) * e,
            -4 * (a1 + a2) * sym + 2 * (a1 - b1 + a2 - b2) * g + 2 * (a1 + b1 + a2 + b2) * e,
            -4 * (a1 + b1) * e + 2 * (a1 - b1 - a2 + b2) * a + 2 * (a1 - b1 + a2 - b2) * sym,
        ]
    )


@dataclass(frozen=True)
class IntegratorConfig:
    """How to integrate and where to sample.

    ``output_grid`` overrides the default ``linspace(0, t_max, samples)``.
    """

    method: Method = "adaptive_rk45"
    step: float = 1e-3
    rtol: float = 1e-9
    atol: float = 1e-12
    t_max: float = 10.0
    samples: int = 1001
    output_grid: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.method not in ("adaptive_rk45", "fixed_rk4", "exact"):
            raise ValueError(f"unknown method {self.method!r}")
        if not (self.step > 0 and self.rtol > 0 and self.atol > 0 and self.t_max > 0):
            raise ValueError("step, rtol, atol and t_max must be positive")
        if self.output_grid is None and self.samples < 2:
            raise ValueError("need at least two samples")

    def grid(self) -> np.ndarray:
        if self.output_grid is not None:
            g = np.asarray(self.output_grid, dtype=float)
            if g.ndim != 1 or g.size == 0 or g[0] < 0 or np.any(np.diff(g) <= 0):
                raise ValueError("output_grid must be non-negative and strictly increasing")
            return g
        return np.linspace(0.0, self.t_max, self.samples)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled populations and concurrence; ``times`` are in units of ``1/gamma0``.

    ``generator`` is the (dimensionless) rate matrix, which makes the state at
    any intermediate time available through :meth:`state_at`.
    """

    times: np.ndarray
    populations: np.ndarray
    generator: np.ndarray

    @property
    def concurrence(self) -> np.ndarray:
        return concurrence_from_populations(self.populations)

    @property
    def k_values(self) -> np.ndarray:
        return k_from_populations(self.populations)

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> PopulationState:
        g, a, s, e = np.clip(self.populations[i], 0.0, None)
        total = g + a + s + e
        return PopulationState(g / total, a / total, s / total, e / total)

    def state_at(self, t: float) -> np.ndarray:
        """Populations at time ``t`` propagated exactly from the nearest earlier sample."""
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        i = min(max(i, 0), len(self.times) - 1)
        dt = t - self.times[i]
        if dt == 0:
            return self.populations[i].copy()
        return expm(self.generator * dt) @ self.populations[i]


# --- integrators ------------------------------------------------------------------------

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _dopri_step(M: np.ndarray, y: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    k = np.empty((7, y.size))
    k[0] = M @ y
    for i in range(1, 7):
        k[i] = M @ (y + h * (np.asarray(_A[i]) @ k[:i]))
    return y + h * (_B5 @ k), h * (_E @ k)


def _integrate_rk45(M: np.ndarray, y0: np.ndarray, grid: np.ndarray, rtol: float, atol: float) -> np.ndarray:
    out = np.empty((grid.size, y0.size))
    t = 0.0
    y = y0.copy()
    scale = max(np.abs(M).max(), 1e-300)
    h = 0.01 / scale
    j = 0
    while j < grid.size and grid[j] <= t:
        out[j] = y
        j += 1
    while j < grid.size:
        target = grid[j]
        h = min(h, target - t)
        if h < 1e-14 * max(1.0, abs(t)):
            raise IntegrationError("step size underflow", t)
        y_new, err_vec = _dopri_step(M, y, h)
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(np.mean((err_vec / sc) ** 2))
        if err <= 1.0:
            t = target if h == target - t else t + h
            y = y_new
            if t == target:
                out[j] = y
                j += 1
            factor = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
        else:
            factor = max(0.2, 0.9 * err ** -0.2)
        h *= factor
        if not np.all(np.isfinite(y)):
            raise IntegrationError("non-finite state", t)
    return out


def _rk4_step(M: np.ndarray, y: np.ndarray, h: float) -> np.ndarray:
    k1 = M @ y
    k2 = M @ (y + 0.5 * h * k1)
    k3 = M @ (y + 0.5 * h * k2)
    k4 = M @ (y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _integrate_rk4(M: np.ndarray, y0: np.ndarray, grid: np.ndarray, step: float) -> np.ndarray:
    out = np.empty((grid.size, y0.size))
    t = 0.0
    y = y0.copy()
    for j, target in enumerate(grid):
        span = target - t
        if span > 0:
            n = max(1, math.ceil(span / step - 1e-9))
            h = span / n
            for _ in range(n):
                y = _rk4_step(M, y, h)
        out[j] = y
        t = target
    return out


def _well_separated(evals: np.ndarray) -> bool:
    top = np.abs(evals).max()
    if top == 0:
        return False
    gaps = np.abs(evals[:, None] - evals[None, :])[np.triu_indices(evals.size, 1)]
    return gaps.min() >= DEGENERACY_RTOL * top


def propagate_exact(M: np.ndarray, y0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """``exp(M t) @ y0`` for every ``t`` in ``times``."""
    times = np.asarray(times, dtype=float)
    evals, vecs = np.linalg.eig(M)
    if np.abs(evals.imag).max() < 1e-12 and _well_separated(evals.real):
        evals, vecs = evals.real, vecs.real
        if np.linalg.cond(vecs) < EIGVEC_COND_MAX:
            coeffs = np.linalg.solve(vecs, y0)
            return (np.exp(np.outer(times, evals)) * coeffs) @ vecs.T
    out = np.empty((times.size, y0.size))
    diffs = np.diff(times)
    if times.size > 1 and np.allclose(diffs, diffs[0], rtol=1e-12, atol=0):
        step = expm(M * diffs[0])
        y = expm(M * times[0]) @ y0
        for j in range(times.size):
            out[j] = y
            y = step @ y
        return out
    for j, t in enumerate(times):
        out[j] = expm(M * t) @ y0
    return out


def integrate(
    initial: PopulationState,
    coeffs: DissipatorCoefficients,
    cfg: IntegratorConfig = IntegratorConfig(),
    gamma0: float = 1.0,
) -> Trajectory:
    """Evolve ``initial`` under explicit coefficients (rates in units of ``gamma0``)."""
    if initial.has_coherences:
        raise ValueError("initial state carries AS/GE coherences, whose dynamics are not modelled")
    M = generator_matrix(coeffs.scaled(1.0 / gamma0))
    grid = cfg.grid()
    y0 = initial.as_array()
    if cfg.method == "adaptive_rk45":
        pops = _integrate_rk45(M, y0, grid, cfg.rtol, cfg.atol)
    elif cfg.method == "fixed_rk4":
        pops = _integrate_rk4(M, y0, grid, cfg.step)
    else:
        pops = propagate_exact(M, y0, grid)
    return Trajectory(times=grid, populations=pops, generator=M)


def evolve(
    initial: PopulationState,
    p: PhysicalParams,
    env: Environment,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """Populations of two atoms in environment ``env``, sampled on ``cfg``'s grid."""
    return integrate(initial, dissipator_coefficients(p, env), cfg, gamma0=p.gamma0)
