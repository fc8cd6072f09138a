"""Closed-form populations in limiting regimes, and the late-time fixed point.

Every Boltzmann factor is expressed through ``q = exp(-omega / 2T)`` (for
accelerated atoms ``q = exp(-pi omega / a)``), which lies in ``[0, 1)``, so
the formulas stay finite at arbitrarily small accelerations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .coefficients import coth_factor, modulating_function, thermal_modulating_function
from .params import Environment, PhysicalParams, PopulationState

EXP_CLAMP = 700.0


class DegenerateFixedPoint(ValueError):
    """At zero separation the late-time state depends on the initial state."""


def _half_boltzmann(p: PhysicalParams, env: Environment) -> float:
    """``q = exp(-omega / 2T)``; zero for the inertial vacuum."""
    x = env.boltzmann_exponent(p)
    if env.kind == "accelerated_vacuum" and p.accel == 0:
        x = math.inf
    return math.exp(-min(0.5 * x, EXP_CLAMP))


def _env_modulating(p: PhysicalParams, env: Environment) -> float:
    if env.kind == "accelerated_vacuum" and p.accel > 0:
        return modulating_function(p.omega, p.accel, p.separation)
    return thermal_modulating_function(p.omega, p.separation)


def asymptotic_state(p: PhysicalParams, env: Environment) -> PopulationState:
    """Late-time populations for ``L > 0``: each atom thermalized independently.

    ``rho_A = rho_S = e^x / (e^x + 1)^2`` with ``x = omega / T`` and
    ``rho_E / rho_G = e^{-2x}``.
    """
    if p.separation == 0:
        raise DegenerateFixedPoint("no unique fixed point at zero separation")
    r = _half_boltzmann(p, env) ** 2  # e^{-x}
    pe = r / (1.0 + r)
    pg = 1.0 / (1.0 + r)
    return PopulationState(pg * pg, pg * pe, pg * pe, pe * pe)


def large_L_solution(initial: Literal["A", "S"], p: PhysicalParams, env: Environment, tau) -> np.ndarray:
    """Populations ``(G, A, S, E)`` for independent atoms (``f = 0``) started in ``|A>`` or ``|S>``.

    ``tau`` is in units of ``1/gamma0`` and may be an array; the result has
    shape ``(..., 4)``. The ``|S>`` solution swaps the A and S columns.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    r = _half_boltzmann(p, env) ** 2
    a1 = 0.25 * coth_factor(-0.5 * math.log(r)) if r > 0 else 0.25
    e4 = np.exp(-4.0 * a1 * tau)
    e8 = np.exp(-8.0 * a1 * tau)
    d = (1.0 + r) ** 2
    g = (-r * e8 - (1.0 - r) * e4 + 1.0) / d
    a = (r * e8 + (1.0 + r * r) * e4 + r) / d
    s = (r * e8 - 2.0 * r * e4 + r) / d
    e = (-r * e8 + r * (1.0 - r) * e4 + r * r) / d
    if initial == "S":
        a, s = s, a
    elif initial != "A":
        raise ValueError("initial must be 'A' or 'S'")
    return np.stack([g, a, s, e], axis=-1)


@dataclass(frozen=True)
class DickeRates:
    """Decay rates of the two collective modes at zero separation (units of ``gamma0``)."""

    gamma1: float
    gamma2: float


def dicke_rates(p: PhysicalParams, env: Environment) -> DickeRates:
    """``G1 = G0 (e^{2y} - e^y + 1)/(e^{2y} - 1)``, ``G2 = G0 (e^{2y} + e^y + 1)/(e^{2y} - 1)``, ``y = w/2T``."""
    q = _half_boltzmann(p, env)
    den = 1.0 - q * q
    return DickeRates(gamma1=p.gamma0 * (1.0 - q + q * q) / den, gamma2=p.gamma0 * (1.0 + q + q * q) / den)


def dicke_solution(initial: Literal["A", "S"], p: PhysicalParams, env: Environment, tau) -> np.ndarray:
    """Populations at zero separation, ``tau`` in units of ``1/gamma0``.

    ``|A>`` is dark and never moves. ``|S>`` relaxes through two exponentials
    with the :class:`DickeRates`; ``rho_A`` stays zero.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    if initial == "A":
        out = np.zeros(tau.shape + (4,))
        out[..., 1] = 1.0
        return out
    if initial != "S":
        raise ValueError("initial must be 'A' or 'S'")
    q = _half_boltzmann(p, env)
    rates = dicke_rates(p, env)
    e1 = np.exp(-2.0 * rates.gamma1 / p.gamma0 * tau)
    e2 = np.exp(-2.0 * rates.gamma2 / p.gamma0 * tau)
    minus = 2.0 * (1.0 - q + q * q)
    plus = 2.0 * (1.0 + q + q * q)
    total = 1.0 + q * q + q**4
    rho_e = q * (1.0 - q) / minus * e1 - q * (1.0 + q) / plus * e2 + q**4 / total
    rho_g = -(1.0 - q) / minus * e1 - (1.0 + q) / plus * e2 + 1.0 / total
    rho_s = (1.0 - q) ** 2 / minus * e1 + (1.0 + q) ** 2 / plus * e2 + q * q / total
    return np.stack([rho_g, np.zeros_like(rho_g), rho_s, rho_e], axis=-1)


def small_a_E_solution(p: PhysicalParams, env: Environment, tau) -> np.ndarray:
    """Populations from ``|E>`` once spontaneous excitation is dropped (``coth -> 1``).

    The modulating function keeps its dependence on the environment. Meant for
    ``pi omega / a >> 1``; not enforced. Needs ``f != 1`` (``L > 0``).
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    f = _env_modulating(p, env)
    if f >= 1.0:
        raise ValueError("small_a_E_solution needs f < 1 (non-zero separation)")
    e2 = np.exp(-2.0 * tau)
    rho_e = e2
    rho_a = (1.0 - f) / (1.0 + f) * e2 * np.expm1((1.0 + f) * tau)
    rho_s = (1.0 + f) / (1.0 - f) * e2 * np.expm1((1.0 - f) * tau)
    if 1.0 - f > 1e-6:
        rho_g = (
            1.0
            - (1.0 + f) / (1.0 - f) * np.exp(-(1.0 + f) * tau)
            - (1.0 - f) / (1.0 + f) * np.exp(-(1.0 - f) * tau)
            + (1.0 + 3.0 * f * f) / (1.0 - f * f) * e2
        )
    else:
        rho_g = 1.0 - rho_a - rho_s - rho_e
    return np.stack([rho_g, rho_a, rho_s, rho_e], axis=-1)


def initial_concurrence_decay_rate(
    limit: Literal["large_L", "dicke_S"], p: PhysicalParams, env: Environment | None = None
) -> float:
    """``-dC/dtau`` at ``tau = 0+``: ``G0 coth(w/4T)`` for large L, twice that in the Dicke limit."""
    env = env or Environment.accelerated()
    x = env.boltzmann_exponent(p)
    rate = p.gamma0 * coth_factor(0.25 * x) if math.isfinite(x) else p.gamma0
    if limit == "large_L":
        return rate
    if limit == "dicke_S":
        return 2.0 * rate
    raise ValueError("limit must be 'large_L' or 'dicke_S'")
