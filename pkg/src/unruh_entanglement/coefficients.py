"""Dissipator coefficients A1, A2, B1, B2 for accelerated, thermal and inertial atoms.

The cross-atom coefficients differ from the single-atom ones only through the
modulating function ``f``; everything else is fixed by detailed balance.
``oracle_fourier_transform`` recomputes the underlying spectra by brute-force
quadrature of the Wightman correlators and exists to check the closed forms.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .params import Environment, PhysicalParams

SERIES_SWITCH = 1e-4
EXP_OVERFLOW = 700.0

Correlator = Literal["G11", "G12"]


def _sinc(x):
    """sin(x)/x with a Taylor series below ``SERIES_SWITCH``."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SERIES_SWITCH
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)


def _asinh_ratio(u):
    """asinh(u)/u with a Taylor series below ``SERIES_SWITCH``."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < SERIES_SWITCH
    safe = np.where(small, 1.0, u)
    u2 = u * u
    return np.where(small, 1.0 - u2 / 6.0 + 3.0 * u2 * u2 / 40.0, np.arcsinh(safe) / safe)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def modulating_function(omega, accel, separation):
    """Cross-correlation factor ``f(omega, a, L)`` for atoms accelerating perpendicular to their separation.

    ``f = sin((2 omega / a) asinh(a L / 2)) / (omega L sqrt(1 + a^2 L^2 / 4))``,
    written as ``sinc(omega L r) r / sqrt(1 + u^2)`` with ``u = a L / 2`` and
    ``r = asinh(u) / u`` so that the limits ``L -> 0`` (f = 1) and ``a -> 0``
    (f = sin(omega L)/(omega L)) are regular. Broadcasts over numpy arrays.
    """
    u = 0.5 * np.asarray(accel, dtype=float) * np.asarray(separation, dtype=float)
    ratio = _asinh_ratio(u)
    phase = np.asarray(omega, dtype=float) * np.asarray(separation, dtype=float) * ratio
    return _scalar(_sinc(phase) * ratio / np.sqrt(1.0 + u * u))


def thermal_modulating_function(omega, separation):
    """Temperature-independent counterpart for static atoms: ``sin(omega L) / (omega L)``."""
    return _scalar(_sinc(np.asarray(omega, dtype=float) * np.asarray(separation, dtype=float)))


def small_accel_series(omega: float, accel: float, separation: float) -> float:
    """Modulating function expanded through second order in the acceleration."""
    wl = omega * separation
    L = separation
    return float(_sinc(wl)) - (L * L * math.cos(wl) + 3.0 * L / omega * math.sin(wl)) * accel**2 / 24.0


def coth_factor(half_exponent: float) -> float:
    """``coth(x)`` for ``x >= 0`` as ``1 + 2/(e^{2x} - 1)``; exactly 1 once ``2x > 700``."""
    if half_exponent < 0:
        raise ValueError("coth_factor expects a non-negative argument")
    if half_exponent == 0:
        return math.inf
    if 2.0 * half_exponent > EXP_OVERFLOW:
        return 1.0
    return 1.0 + 2.0 / math.expm1(2.0 * half_exponent)


@dataclass(frozen=True)
class DissipatorCoefficients:
    """Single-atom (``a1``, ``b1``) and cross-atom (``a2``, ``b2``) dissipator rates."""

    a1: float
    a2: float
    b1: float
    b2: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.b1, self.b2)

    def scaled(self, factor: float) -> "DissipatorCoefficients":
        return DissipatorCoefficients(*(factor * c for c in self.as_tuple()))


def dissipator_coefficients(
    p: PhysicalParams, env: Environment, inertial_fallback: bool = True
) -> DissipatorCoefficients:
    """Coefficients of the dissipator, in the same units as ``p.gamma0``.

    For accelerated atoms ``A1 = (G0/4) coth(pi w / a)``, ``B1 = G0/4`` and the
    cross terms carry ``f(w, a, L)``. A thermal bath uses ``coth(w / 2T)`` and the
    sinc modulating function; the inertial vacuum has ``coth = 1``.

    An accelerated environment with ``a = 0`` is the inertial vacuum; pass
    ``inertial_fallback=False`` to reject it instead.
    """
    quarter = 0.25 * p.gamma0
    if env.kind == "accelerated_vacuum" and p.accel == 0:
        if not inertial_fallback:
            raise ValueError("accelerated_vacuum with accel = 0; use Environment.inertial()")
        env = Environment.inertial()

    if env.kind == "accelerated_vacuum":
        c = coth_factor(math.pi * p.omega / p.accel)
        f = modulating_function(p.omega, p.accel, p.separation)
    elif env.kind == "thermal_bath":
        c = coth_factor(p.omega / (2.0 * env.temperature))
        f = thermal_modulating_function(p.omega, p.separation)
    else:
        c = 1.0
        f = thermal_modulating_function(p.omega, p.separation)
    return DissipatorCoefficients(a1=quarter * c, a2=quarter * c * f, b1=quarter, b2=quarter * f)


def coefficients_from_spectra(
    p: PhysicalParams, g11_pos: float, g11_neg: float, g12_pos: float, g12_neg: float
) -> DissipatorCoefficients:
    """Assemble A and B from the spectra at ``+omega`` and ``-omega``.

    ``A = (mu^2/4)[G(w) + G(-w)]``, ``B = (mu^2/4)[G(w) - G(-w)]`` with
    ``mu^2 = 2 pi G0 / w``.
    """
    mu2 = 2.0 * math.pi * p.gamma0 / p.omega
    return DissipatorCoefficients(
        a1=0.25 * mu2 * (g11_pos + g11_neg),
        a2=0.25 * mu2 * (g12_pos + g12_neg),
        b1=0.25 * mu2 * (g11_pos - g11_neg),
        b2=0.25 * mu2 * (g12_pos - g12_neg),
    )


# --- spectra of the field correlators -------------------------------------------------


def fourier_correlator(correlator: Correlator, lam: float, accel: float, separation: float = 0.0) -> float:
    """Closed-form Fourier transform of the accelerated Wightman correlators.

    ``G11(lam) = (1/2pi) lam / (1 - exp(-2 pi lam / a))`` and
    ``G12(lam) = G11(lam) f(lam, a, L)``.
    """
    if lam == 0:
        raise ValueError("lam must be non-zero")
    if accel <= 0:
        raise ValueError("accel must be positive")
    s = 2.0 * math.pi * lam / accel
    if s < -EXP_OVERFLOW:
        g11 = 0.0
    else:
        g11 = lam / (2.0 * math.pi) / (-math.expm1(-s))
    if correlator == "G11":
        return g11
    if correlator == "G12":
        return g11 * modulating_function(lam, accel, separation)
    raise ValueError(f"unknown correlator {correlator!r}")


def wightman_correlator(dtau, accel: float, separation: float, eps: float):
    """Regularized two-point function along the accelerated trajectories.

    ``-a^2/(16 pi^2) / (sinh^2(a (dtau - i eps)/2) - a^2 L^2 / 4)``; ``separation = 0``
    gives the same-atom correlator. ``eps`` is a time.
    """
    sh = np.sinh(0.5 * accel * (np.asarray(dtau, dtype=complex) - 1j * eps))
    return -(accel**2) / (16.0 * math.pi**2) / (sh * sh - (0.5 * accel * separation) ** 2)


class FourierOracleError(RuntimeError):
    """Quadrature did not reach the requested accuracy."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


_PEAK_HALF_WIDTH = 50.0
_ENVELOPE_FLOOR = 1e-10


def _transform_at_eps(lam: float, accel: float, separation: float, eps: float) -> tuple[float, float]:
    # G(-t) = conj(G(t)) on the real line, so the transform is 2 Re of the half-line integral.
    t0 = 2.0 / accel * math.asinh(0.5 * accel * separation)
    t_cut = t0 + max(math.log(accel**2 / (4.0 * math.pi**2) / _ENVELOPE_FLOOR), 1.0) / accel
    w = _PEAK_HALF_WIDTH * eps
    breaks = sorted({0.0, w, max(t0 - w, 0.0), t0, t0 + w, t_cut})
    breaks = [b for b in breaks if b <= t_cut]

    def integrand(t):
        return (np.exp(1j * lam * t) * wightman_correlator(t, accel, separation, eps)).real

    total = 0.0
    abserr = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        for lo, hi in zip(breaks[:-1], breaks[1:]):
            if hi <= lo:
                continue
            try:
                val, err = quad(integrand, lo, hi, limit=2000, epsabs=1e-13, epsrel=1e-12)
            except IntegrationWarning as exc:
                raise FourierOracleError(f"quadrature failed on [{lo:.4g}, {hi:.4g}]: {exc}", math.inf)
            total += val
            abserr += err
    return 2.0 * total, 2.0 * abserr


def oracle_fourier_transform(
    correlator: Correlator,
    p: PhysicalParams,
    lam: float,
    eps_values: tuple[float, float, float] | None = None,
    rtol: float = 1e-4,
    atol: float = 0.0,
) -> float:
    """Numerically Fourier-transform a Wightman correlator (test oracle).

    Integrates ``exp(i lam t) G(t)`` over the real line at three finite
    regulators ``eps, eps/2, eps/4`` and Richardson-extrapolates to ``eps -> 0``
    (two elimination passes, first and second order). Raises
    :class:`FourierOracleError` if the quadrature or the extrapolation do not
    reach ``rtol * |value| + atol``; the Boltzmann-suppressed negative
    frequencies need an ``atol``.
    """
    if lam == 0:
        raise ValueError("lam must be non-zero")
    if p.accel <= 0:
        raise ValueError("the oracle needs accel > 0")
    if eps_values is None:
        eps_values = tuple(e / p.omega for e in (1e-2, 5e-3, 2.5e-3))
    e0, e1, e2 = eps_values
    if not (math.isclose(e0, 2 * e1) and math.isclose(e1, 2 * e2)):
        raise ValueError("eps_values must halve successively")
    if correlator == "G11":
        sep = 0.0
    elif correlator == "G12":
        sep = p.separation
    else:
        raise ValueError(f"unknown correlator {correlator!r}")

    vals, errs = zip(*(_transform_at_eps(lam, p.accel, sep, e) for e in eps_values))
    r1_coarse = 2.0 * vals[1] - vals[0]
    r1_fine = 2.0 * vals[2] - vals[1]
    r2 = (4.0 * r1_fine - r1_coarse) / 3.0
    estimate = abs(r2 - r1_fine) + 4.0 * max(errs)
    if not estimate <= rtol * abs(r2) + atol:
        raise FourierOracleError(f"{correlator} transform at lam={lam} did not converge", estimate)
    return r2
