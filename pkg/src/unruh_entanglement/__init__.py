"""Entanglement dynamics of two uniformly accelerated two-level atoms."""
from .params import (
    Environment,
    PhysicalParams,
    PopulationState,
    XStateDensityMatrix,
    to_coupled_basis,
    to_x_state,
    unruh_temperature,
)
from .coefficients import (
    DissipatorCoefficients,
    dissipator_coefficients,
    modulating_function,
    oracle_fourier_transform,
    thermal_modulating_function,
)
from .dynamics import IntegratorConfig, Trajectory, evolve, integrate, population_rhs
from .entanglement import concurrence_populations, concurrence_x, detect_events

__version__ = "0.1.0"
