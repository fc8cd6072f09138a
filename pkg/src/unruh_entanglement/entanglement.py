"""Concurrence of X states and detection of sudden death, sudden birth and maxima."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np
from scipy.optimize import brentq

from .params import PopulationState, XStateDensityMatrix, to_x_state

if TYPE_CHECKING:
    from .dynamics import Trajectory

DEFAULT_THRESHOLD = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def concurrence_x(x: XStateDensityMatrix) -> float:
    """``2 max(0, K1, K2)`` with ``K1 = |rho23| - sqrt(rho11 rho44)``, ``K2 = |rho14| - sqrt(rho22 rho33)``."""
    r11, r22, r33, r44 = np.clip(np.asarray(x.diagonal, dtype=float), 0.0, None)
    k1 = abs(x.rho23) - math.sqrt(r11 * r44)
    k2 = abs(x.rho14) - math.sqrt(r22 * r33)
    return 2.0 * max(0.0, k1, k2)


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit density matrix from the spin-flipped spectrum.

    ``C = max(0, l1 - l2 - l3 - l4)`` where ``l_i`` are the square roots, in
    decreasing order, of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)``.
    """
    rho = np.asarray(rho, dtype=complex)
    flipped = _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    evals = np.linalg.eigvals(rho @ flipped)
    lam = np.sort(np.sqrt(np.abs(evals.real)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def k_from_populations(pops) -> np.ndarray | float:
    """``K = |rho_S - rho_A| - 2 sqrt(rho_G rho_E)``; accepts ``(..., 4)`` arrays."""
    p = np.asarray(pops, dtype=float)
    g = np.clip(p[..., 0], 0.0, None)
    e = np.clip(p[..., 3], 0.0, None)
    k = np.abs(p[..., 2] - p[..., 1]) - 2.0 * np.sqrt(g * e)
    return float(k) if k.ndim == 0 else k


def concurrence_from_populations(pops) -> np.ndarray | float:
    k = k_from_populations(pops)
    c = np.clip(k, 0.0, 1.0)
    return float(c) if np.ndim(c) == 0 else c


def concurrence_populations(s: PopulationState) -> float:
    """Concurrence of a coherence-free state from its coupled-basis populations."""
    return float(concurrence_from_populations(s.as_array()))


def reconstruct(s: PopulationState) -> XStateDensityMatrix:
    return to_x_state(s)


@dataclass(frozen=True)
class EntanglementEvents:
    """Sudden death and birth times, and the maximum concurrence reached.

    Times are ``None`` when the event does not happen within the trajectory.
    """

    death_time: float | None
    birth_time: float | None
    max_concurrence: float
    max_time: float | None


def _golden_max(fn: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = fn(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _crossing(fn: Callable[[float], float], lo: float, hi: float) -> float:
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0 or np.sign(flo) == np.sign(fhi):
        return hi
    return brentq(fn, lo, hi, xtol=1e-13, rtol=1e-10)


def detect_events(traj: "Trajectory", threshold: float = DEFAULT_THRESHOLD) -> EntanglementEvents:
    """Locate the first sudden birth, the first sudden death and the maximum of ``C``.

    Concurrence at or below ``threshold`` counts as zero. Crossings are
    bracketed by samples and refined with Brent's method on ``K(t)``; the
    maximum is refined by golden-section search around the best sample.
    Between samples the state is propagated exactly from the trajectory's
    generator, so refinement does not depend on the integrator.
    """
    times = traj.times
    if len(times) == 0:
        raise ValueError("empty trajectory")
    k = np.asarray(traj.k_values, dtype=float)

    def shifted(t: float) -> float:
        return float(k_from_populations(traj.state_at(t))) - threshold

    best = int(np.argmax(k))
    t_best, k_best = float(times[best]), float(k[best])
    if len(times) > 1:
        lo = float(times[max(best - 1, 0)])
        hi = float(times[min(best + 1, len(times) - 1)])
        t_ref, k_ref = _golden_max(lambda t: shifted(t) + threshold, lo, hi, tol=1e-9 * max(1.0, hi))
        if k_ref > k_best:
            t_best, k_best = t_ref, k_ref

    entangled = k > threshold
    birth = death = None
    was_entangled = bool(entangled[0])
    for i in range(1, len(times)):
        if entangled[i] and not was_entangled and birth is None:
            birth = _crossing(shifted, float(times[i - 1]), float(times[i]))
        if was_entangled and not entangled[i] and death is None:
            death = _crossing(shifted, float(times[i - 1]), float(times[i]))
        was_entangled = bool(entangled[i])
        if birth is not None and death is not None:
            break

    # a hump narrower than the sampling that only the refined maximum sees
    if not entangled.any() and k_best > threshold and len(times) > 1:
        lo = float(times[max(best - 1, 0)])
        hi = float(times[min(best + 1, len(times) - 1)])
        birth = _crossing(shifted, lo, t_best)
        death = _crossing(shifted, t_best, hi)

    if k_best <= threshold:
        return EntanglementEvents(death_time=death, birth_time=birth, max_concurrence=0.0, max_time=None)
    return EntanglementEvents(
        death_time=death, birth_time=birth, max_concurrence=min(k_best, 1.0), max_time=t_best
    )
