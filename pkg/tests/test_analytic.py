import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unruh_entanglement.analytic import (
    DegenerateFixedPoint,
    asymptotic_state,
    dicke_rates,
    dicke_solution,
    initial_concurrence_decay_rate,
    large_L_solution,
    small_a_E_solution,
)
from unruh_entanglement.coefficients import DissipatorCoefficients, dissipator_coefficients
from unruh_entanglement.dynamics import IntegratorConfig, evolve, generator_matrix, integrate
from unruh_entanglement.params import Environment, PhysicalParams, PopulationState

# frozen with 30-digit mpmath
E_OVER_E_PLUS_1_SQ = 0.19661193324148185  # e/(e+1)^2
COTH_PI_OVER_4 = 1.5248686188220640


def _p(a, wl, gamma0=1e-3):
    return PhysicalParams(omega=1.0, accel=a, separation=wl, gamma0=gamma0)


def _residual(sol, M, tau, h=1e-5):
    # central difference of the closed form against M @ y
    dy = (sol(tau + h) - sol(tau - h)) / (2 * h)
    return np.abs(dy - sol(tau) @ M.T).max()


@pytest.mark.parametrize("a", [0.5, 2.0, 10.0])
@pytest.mark.parametrize("initial", ["A", "S"])
def test_large_L_solves_rate_equations(a, initial):
    p = _p(a, 1.0)
    c = dissipator_coefficients(p, Environment.accelerated()).scaled(1 / p.gamma0)
    M = generator_matrix(DissipatorCoefficients(c.a1, 0.0, c.b1, 0.0))
    tau = np.linspace(0.01, 10, 50)
    sol = lambda t: large_L_solution(initial, p, Environment.accelerated(), t)  # noqa: E731
    assert _residual(sol, M, tau) < 1e-8
    y0 = sol(0.0)
    np.testing.assert_allclose(y0, PopulationState.named(initial).as_array(), atol=1e-15)


@pytest.mark.parametrize("a", [0.5, 2.0, 10.0])
def test_dicke_solves_rate_equations(a):
    p = _p(a, 0.0)
    env = Environment.accelerated()
    M = generator_matrix(dissipator_coefficients(p, env).scaled(1 / p.gamma0))
    sol = lambda t: dicke_solution("S", p, env, t)  # noqa: E731
    assert _residual(sol, M, np.linspace(0.01, 20, 50)) < 1e-8
    np.testing.assert_allclose(sol(0.0), [0, 0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(sol(np.array([0.0, 3.0, 50.0])).sum(axis=-1), 1.0, atol=1e-14)


def test_dicke_dark_state_frozen():
    out = dicke_solution("A", _p(2.0, 0.0), Environment.accelerated(), np.array([0.0, 7.0]))
    np.testing.assert_array_equal(out, [[0, 1, 0, 0], [0, 1, 0, 0]])


def test_dicke_rates_limits():
    r = dicke_rates(_p(1e-3, 0.0), Environment.accelerated())
    assert r.gamma1 == pytest.approx(1e-3, rel=1e-14)
    assert r.gamma2 == pytest.approx(1e-3, rel=1e-14)
    r = dicke_rates(_p(2.0, 0.0), Environment.accelerated())
    q = math.exp(-math.pi / 2)
    assert r.gamma2 / r.gamma1 == pytest.approx((1 + q + q * q) / (1 - q + q * q), rel=1e-14)


@pytest.mark.parametrize("a", [0.5, 2.0, 10.0])
@pytest.mark.parametrize("wl", [0.1, 1.0, 5.0])
def test_asymptotic_state_is_stationary(a, wl):
    p = _p(a, wl)
    env = Environment.accelerated()
    c = dissipator_coefficients(p, env).scaled(1 / p.gamma0)
    s = asymptotic_state(p, env)
    assert np.abs(generator_matrix(c) @ s.as_array()).max() < 1e-13
    assert s.rho_A == s.rho_S


def test_asymptotic_state_frozen_value():
    # x = 2 pi omega / a = 1
    s = asymptotic_state(_p(2 * math.pi, 1.0), Environment.accelerated())
    assert s.rho_A == pytest.approx(E_OVER_E_PLUS_1_SQ, rel=1e-14)
    assert s.rho_E / s.rho_G == pytest.approx(math.exp(-2.0), rel=1e-14)


def test_asymptotic_state_extreme_accelerations():
    s = asymptotic_state(_p(1e-4, 1.0), Environment.accelerated())
    assert s.as_array().tolist() == [1.0, 0.0, 0.0, 0.0]
    s = asymptotic_state(_p(1e6, 1.0), Environment.accelerated())
    np.testing.assert_allclose(s.as_array(), 0.25, atol=1e-5)


def test_asymptotic_state_degenerate_at_zero_separation():
    with pytest.raises(DegenerateFixedPoint):
        asymptotic_state(_p(2.0, 0.0), Environment.accelerated())


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 10.0), st.floats(0.3, 4.0), st.sampled_from(["A", "S", "E", "mixed"]))
def test_fixed_point_independent_of_initial_state(a, wl, initial):
    p = _p(a, wl)
    env = Environment.accelerated()
    # near-dark |A> relaxes at a rate ~ (1 - f); run for many slowest lifetimes
    M = generator_matrix(dissipator_coefficients(p, env).scaled(1 / p.gamma0))
    slowest = np.sort(np.abs(np.linalg.eigvals(M).real))[1]
    cfg = IntegratorConfig(method="exact", output_grid=(0.0, 40.0 / slowest))
    tr = evolve(PopulationState.named(initial), p, env, cfg)
    np.testing.assert_allclose(tr.populations[-1], asymptotic_state(p, env).as_array(), atol=1e-6)


def test_small_a_E_solution_matches_integration():
    for wl in (0.5, 1.5, 3.0):
        p = _p(0.05, wl)  # pi omega / a ~ 63: spontaneous excitation negligible
        env = Environment.accelerated()
        tau = np.linspace(0, 10, 101)
        num = evolve(PopulationState.excited(), p, env, IntegratorConfig(method="exact", output_grid=tuple(tau)))
        np.testing.assert_allclose(num.populations, small_a_E_solution(p, env, tau), atol=1e-12)


def test_small_a_E_solution_solves_zero_temperature_equations():
    p = _p(1.0, 1.2)
    env = Environment.inertial()
    M = generator_matrix(dissipator_coefficients(p, env).scaled(1 / p.gamma0))
    sol = lambda t: small_a_E_solution(p, env, t)  # noqa: E731
    assert _residual(sol, M, np.linspace(0.01, 10, 40)) < 1e-8


def test_small_a_E_solution_near_unit_f():
    p = _p(0.01, 1e-4)
    out = small_a_E_solution(p, Environment.accelerated(), np.array([0.0, 1.0, 5.0]))
    np.testing.assert_allclose(out.sum(axis=-1), 1.0, atol=1e-14)
    assert out.min() >= -1e-14
    with pytest.raises(ValueError):
        small_a_E_solution(_p(0.01, 0.0), Environment.accelerated(), 1.0)


def test_initial_decay_rate_frozen_value():
    p = _p(2.0, 1.0)  # coth(pi omega / 2a) = coth(pi/4)
    assert initial_concurrence_decay_rate("large_L", p) == pytest.approx(1e-3 * COTH_PI_OVER_4, rel=1e-14)
    assert initial_concurrence_decay_rate("dicke_S", p) == pytest.approx(2e-3 * COTH_PI_OVER_4, rel=1e-14)
    assert initial_concurrence_decay_rate("large_L", p, Environment.inertial()) == 1e-3
    with pytest.raises(ValueError):
        initial_concurrence_decay_rate("small_L", p)


def test_initial_decay_rate_against_integration():
    for a in (0.5, 2.0, 10.0):
        p = _p(a, 0.0)
        h = 1e-5
        tr = evolve(
            PopulationState.symmetric(),
            p,
            Environment.accelerated(),
            IntegratorConfig(method="exact", output_grid=(0.0, h)),
        )
        slope = (tr.concurrence[0] - tr.concurrence[1]) / h
        assert slope * p.gamma0 == pytest.approx(initial_concurrence_decay_rate("dicke_S", p), rel=5e-3)


def test_closed_forms_reject_negative_time():
    p = _p(2.0, 1.0)
    with pytest.raises(ValueError):
        large_L_solution("A", p, Environment.accelerated(), -1.0)
    with pytest.raises(ValueError):
        dicke_solution("S", p, Environment.accelerated(), [-1.0])
    with pytest.raises(ValueError):
        large_L_solution("E", p, Environment.accelerated(), 1.0)


def test_large_L_thermal_equals_accelerated():
    p = _p(2.0, 1.0)
    tau = np.linspace(0, 10, 11)
    np.testing.assert_allclose(
        large_L_solution("A", p, Environment.accelerated(), tau),
        large_L_solution("A", p, Environment.thermal_at_unruh(p), tau),
        atol=1e-15,
    )


def test_integrate_with_explicit_coefficients_matches_large_L():
    p = _p(0.5, 1.0)
    c = dissipator_coefficients(p, Environment.accelerated())
    tau = np.linspace(0, 10, 201)
    tr = integrate(
        PopulationState.antisymmetric(),
        DissipatorCoefficients(c.a1, 0.0, c.b1, 0.0),
        IntegratorConfig(output_grid=tuple(tau)),
        gamma0=p.gamma0,
    )
    ref = large_L_solution("A", p, Environment.accelerated(), tau)
    assert np.abs(tr.populations - ref).max() < 1e-8
