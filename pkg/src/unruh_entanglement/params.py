"""Physical parameters, environments and the two-atom X-state representations.

Conventions
-----------
Natural units (hbar = c = k_B = 1). The computational basis is ordered
``|1> = |00>, |2> = |10>, |3> = |01>, |4> = |11>``, and the coupled basis is

    |G> = |00>,  |A> = (|10> - |01>)/sqrt(2),  |S> = (|10> + |01>)/sqrt(2),  |E> = |11>.

|G> is the collective ground state and |E> the doubly excited state: under
the population equations rho_E decays and rho_G grows, which fixes that
reading of the labels.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

POPULATION_SLACK = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
WEAK_COUPLING_WARN = 0.1

EnvironmentKind = Literal["accelerated_vacuum", "thermal_bath", "inertial_vacuum"]


def unruh_temperature(accel: float) -> float:
    """Temperature ``a / 2 pi`` seen by a detector with proper acceleration ``a``."""
    if accel < 0:
        raise ValueError(f"acceleration must be non-negative, got {accel}")
    return accel / (2.0 * math.pi)


@dataclass(frozen=True)
class PhysicalParams:
    """Atomic gap ``omega``, proper acceleration ``accel``, separation and emission rate.

    ``gamma0`` is the single-atom spontaneous emission rate ``mu^2 omega / 2 pi``;
    the coupling constant itself never appears separately.
    """

    omega: float
    accel: float
    separation: float
    gamma0: float

    def __post_init__(self) -> None:
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if not self.accel >= 0:
            raise ValueError(f"accel must be non-negative, got {self.accel}")
        if not self.separation >= 0:
            raise ValueError(f"separation must be non-negative, got {self.separation}")
        if self.gamma0 / self.omega > WEAK_COUPLING_WARN:
            warnings.warn(
                f"gamma0/omega = {self.gamma0 / self.omega:.3g} is outside the weak-coupling regime",
                stacklevel=3,
            )

    @classmethod
    def dimensionless(
        cls, a_over_omega: float, omega_L: float, gamma0_over_omega: float = 1e-3
    ) -> "PhysicalParams":
        """Build parameters from the plotted axes ``a/omega`` and ``omega L`` with ``omega = 1``."""
        return cls(omega=1.0, accel=a_over_omega, separation=omega_L, gamma0=gamma0_over_omega)

    @property
    def a_over_omega(self) -> float:
        return self.accel / self.omega

    @property
    def omega_L(self) -> float:
        return self.omega * self.separation


@dataclass(frozen=True)
class Environment:
    """Which bath the atoms see.

    Use the constructors :meth:`accelerated`, :meth:`thermal` and :meth:`inertial`.
    For a thermal bath the acceleration stored in :class:`PhysicalParams` is ignored.
    """

    kind: EnvironmentKind
    temperature: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("accelerated_vacuum", "thermal_bath", "inertial_vacuum"):
            raise ValueError(f"unknown environment kind {self.kind!r}")
        if self.kind == "thermal_bath":
            if self.temperature is None or not self.temperature > 0:
                raise ValueError("thermal_bath requires temperature > 0")
        elif self.temperature is not None:
            raise ValueError(f"{self.kind} takes no temperature")

    @classmethod
    def accelerated(cls) -> "Environment":
        return cls("accelerated_vacuum")

    @classmethod
    def thermal(cls, temperature: float) -> "Environment":
        return cls("thermal_bath", temperature)

    @classmethod
    def inertial(cls) -> "Environment":
        return cls("inertial_vacuum")

    @classmethod
    def thermal_at_unruh(cls, p: PhysicalParams) -> "Environment":
        """Thermal bath at the Unruh temperature of ``p.accel`` (inertial vacuum when ``a = 0``)."""
        if p.accel == 0:
            return cls.inertial()
        return cls.thermal(unruh_temperature(p.accel))

    def effective_temperature(self, p: PhysicalParams) -> float:
        if self.kind == "thermal_bath":
            return float(self.temperature)
        if self.kind == "accelerated_vacuum":
            return unruh_temperature(p.accel)
        return 0.0

    def boltzmann_exponent(self, p: PhysicalParams) -> float:
        """``omega / T`` (``2 pi omega / a`` for accelerated atoms); ``inf`` at zero temperature."""
        T = self.effective_temperature(p)
        return math.inf if T == 0 else p.omega / T

    @property
    def label(self) -> str:
        return {"accelerated_vacuum": "accel", "thermal_bath": "thermal", "inertial_vacuum": "inertial"}[
            self.kind
        ]


@dataclass(frozen=True)
class PopulationState:
    """Populations in the coupled basis, plus the two coherences that X states can carry.

    The coherences ``rho_AS`` and ``rho_GE`` are stored but never evolved; the
    population equations are closed without them.
    """

    rho_G: float
    rho_A: float
    rho_S: float
    rho_E: float
    rho_AS: complex = field(default=0j)
    rho_GE: complex = field(default=0j)

    def __post_init__(self) -> None:
        pops = self.as_array()
        if np.any(pops < -POPULATION_SLACK) or np.any(pops > 1 + POPULATION_SLACK):
            raise ValueError(f"populations outside [0, 1]: {pops}")
        if abs(pops.sum() - 1.0) > TRACE_TOL:
            raise ValueError(f"populations do not sum to one: sum = {pops.sum()!r}")

    @classmethod
    def from_array(cls, values) -> "PopulationState":
        g, a, s, e = (float(v) for v in values)
        return cls(g, a, s, e)

    @classmethod
    def ground(cls) -> "PopulationState":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def antisymmetric(cls) -> "PopulationState":
        return cls(0.0, 1.0, 0.0, 0.0)

    @classmethod
    def symmetric(cls) -> "PopulationState":
        return cls(0.0, 0.0, 1.0, 0.0)

    @classmethod
    def excited(cls) -> "PopulationState":
        return cls(0.0, 0.0, 0.0, 1.0)

    @classmethod
    def maximally_mixed(cls) -> "PopulationState":
        return cls(0.25, 0.25, 0.25, 0.25)

    @classmethod
    def named(cls, name: str) -> "PopulationState":
        table = {"G": cls.ground, "A": cls.antisymmetric, "S": cls.symmetric, "E": cls.excited,
                 "mixed": cls.maximally_mixed}
        try:
            return table[name]()
        except KeyError:
            raise ValueError(f"unknown state {name!r}; expected one of {sorted(table)}") from None

    def as_array(self) -> np.ndarray:
        return np.array([self.rho_G, self.rho_A, self.rho_S, self.rho_E], dtype=float)

    def clamped(self) -> np.ndarray:
        """Populations with rounding negatives set to zero."""
        return np.clip(self.as_array(), 0.0, None)

    @property
    def has_coherences(self) -> bool:
        return self.rho_AS != 0 or self.rho_GE != 0


@dataclass(frozen=True)
class XStateDensityMatrix:
    """Two-qubit X state in the computational basis.

    ``diagonal`` holds ``(rho_11, rho_22, rho_33, rho_44)``; the antidiagonal is
    set by ``rho14`` and ``rho23`` (their conjugates fill the lower triangle).
    """

    diagonal: tuple[float, float, float, float]
    rho14: complex = 0j
    rho23: complex = 0j

    def __post_init__(self) -> None:
        d = np.asarray(self.diagonal, dtype=float)
        if d.shape != (4,):
            raise ValueError("diagonal must have four entries")
        if np.any(d < -POPULATION_SLACK):
            raise ValueError(f"negative diagonal entries: {d}")
        if abs(d.sum() - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {d.sum()!r}, expected 1")
        evals = np.linalg.eigvalsh(self.as_matrix())
        if evals.min() < -PSD_TOL:
            raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {evals.min():.3e})")

    def as_matrix(self) -> np.ndarray:
        r11, r22, r33, r44 = self.diagonal
        m = np.diag(np.array([r11, r22, r33, r44], dtype=complex))
        m[0, 3] = self.rho14
        m[3, 0] = np.conj(self.rho14)
        m[1, 2] = self.rho23
        m[2, 1] = np.conj(self.rho23)
        return m


def to_coupled_basis(x: XStateDensityMatrix) -> PopulationState:
    """Rewrite an X state in the {G, A, S, E} basis, keeping the coherences."""
    r11, r22, r33, r44 = (float(v) for v in x.diagonal)
    rho23 = complex(x.rho23)
    mean = 0.5 * (r22 + r33)
    return PopulationState(
        rho_G=r11,
        rho_A=mean - rho23.real,
        rho_S=mean + rho23.real,
        rho_E=r44,
        rho_AS=complex(0.5 * (r22 - r33), rho23.imag),
        rho_GE=complex(x.rho14),
    )


def to_x_state(s: PopulationState) -> XStateDensityMatrix:
    """Inverse of :func:`to_coupled_basis`."""
    mean = 0.5 * (s.rho_A + s.rho_S)
    rho_as = complex(s.rho_AS)
    return XStateDensityMatrix(
        diagonal=(s.rho_G, mean + rho_as.real, mean - rho_as.real, s.rho_E),
        rho14=complex(s.rho_GE),
        rho23=complex(0.5 * (s.rho_S - s.rho_A), rho_as.imag),
    )
