import math

import mpmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unruh_entanglement.coefficients import (
    DissipatorCoefficients,
    FourierOracleError,
    coefficients_from_spectra,
    coth_factor,
    dissipator_coefficients,
    fourier_correlator,
    modulating_function,
    oracle_fourier_transform,
    small_accel_series,
    thermal_modulating_function,
)
from unruh_entanglement.params import Environment, PhysicalParams, unruh_temperature

# G12/G11 from oracle_fourier_transform at (omega=1, a=2, L=1), computed once and frozen
F_1_2_1_ORACLE = 0.5456130210851723


def _p(a, wl, gamma0=1e-3):
    return PhysicalParams(omega=1.0, accel=a, separation=wl, gamma0=gamma0)


def test_modulating_function_l_to_zero():
    for a in (0.0, 0.3, 2.0, 50.0):
        assert modulating_function(1.0, a, 0.0) == 1.0
        assert modulating_function(1.0, a, 1e-9) == pytest.approx(1.0, abs=1e-12)


def test_modulating_function_inertial_limit():
    assert modulating_function(1.0, 0.0, math.pi) == pytest.approx(0.0, abs=1e-15)
    assert modulating_function(1.0, 1e-7, 2.3) == pytest.approx(math.sin(2.3) / 2.3, abs=1e-12)


def test_modulating_function_matches_frozen_oracle_value():
    assert modulating_function(1.0, 2.0, 1.0) == pytest.approx(F_1_2_1_ORACLE, rel=1e-8)


def test_modulating_function_literal_closed_form():
    for a, L in [(2.0, 1.0), (0.5, 4.0), (10.0, 0.5)]:
        literal = math.sin(2 / a * math.asinh(a * L / 2)) / (L * math.sqrt(1 + a * a * L * L / 4))
        assert modulating_function(1.0, a, L) == pytest.approx(literal, rel=1e-13)


def _f_mp(omega, a, L):
    mpmath.mp.dps = 40
    a, L = mpmath.mpf(a), mpmath.mpf(L)
    return float(mpmath.sin(2 * omega / a * mpmath.asinh(a * L / 2)) / (omega * L * mpmath.sqrt(1 + a * a * L * L / 4)))


@pytest.mark.parametrize(
    "a, L",
    [
        (0.5, 1e-4 * (1 - 1e-9)),
        (0.5, 1e-4 * (1 + 1e-9)),
        (1.0, 2e-4 * (1 - 1e-9)),  # u = aL/2 straddles the switch
        (1.0, 2e-4 * (1 + 1e-9)),
        (1e-6, 3.0),
        (1e-3, 3.0),
    ],
)
def test_series_switchover_matches_high_precision(a, L):
    assert modulating_function(1.0, a, L) == pytest.approx(_f_mp(1.0, a, L), abs=1e-15)


def test_modulating_function_broadcasts():
    a = np.array([0.1, 1.0, 10.0])
    out = modulating_function(1.0, a, 1.0)
    assert out.shape == (3,)
    np.testing.assert_allclose(out, [modulating_function(1.0, x, 1.0) for x in a])


@settings(max_examples=300, deadline=None)
@given(
    st.floats(0.01, 10.0),
    st.floats(0.0, 50.0),
    st.floats(1e-6, 20.0),
)
def test_modulating_function_bounded_and_even(omega, a, L):
    f = modulating_function(omega, a, L)
    assert abs(f) <= 1.0
    assert f == pytest.approx(modulating_function(-omega, a, L), abs=1e-15)


@pytest.mark.parametrize("wl, expected", [(0.0, 1.0), (math.pi, 0.0), (1.0, 0.8414709848078965)])
def test_thermal_modulating_function(wl, expected):
    assert thermal_modulating_function(1.0, wl) == pytest.approx(expected, abs=1e-15)


def test_small_accel_expansion_residual_is_fourth_order():
    for wl in (0.5, 1.0, 4.0):
        r1 = abs(modulating_function(1.0, 0.1, wl) - small_accel_series(1.0, 0.1, wl))
        r2 = abs(modulating_function(1.0, 0.025, wl) - small_accel_series(1.0, 0.025, wl))
        assert 128 <= r1 / r2 <= 512


def test_coth_factor():
    assert coth_factor(1.0) == pytest.approx(1 / math.tanh(1.0), rel=1e-15)
    assert coth_factor(400.0) == 1.0
    assert coth_factor(1e-3) == pytest.approx(1 / math.tanh(1e-3), rel=1e-12)


def test_coefficients_large_accel_asymptote():
    a = 1e4
    c = dissipator_coefficients(_p(a, 1.0), Environment.accelerated())
    assert c.a1 * math.pi / a == pytest.approx(0.25e-3, rel=1e-6)


def test_coefficients_small_accel_limit():
    c = dissipator_coefficients(_p(1e-3, 1.0), Environment.accelerated())
    assert c.a1 == pytest.approx(0.25e-3, rel=1e-15)
    assert c.b1 == 0.25e-3


def test_coefficients_zero_separation():
    c = dissipator_coefficients(_p(2.0, 0.0), Environment.accelerated())
    assert c.a2 == c.a1
    assert c.b2 == c.b1
    assert c.a1 > c.b1


def test_accel_zero_falls_back_to_inertial():
    p = _p(0.0, 1.0)
    c = dissipator_coefficients(p, Environment.accelerated())
    assert c == dissipator_coefficients(p, Environment.inertial())
    with pytest.raises(ValueError):
        dissipator_coefficients(p, Environment.accelerated(), inertial_fallback=False)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 100.0), st.floats(0.0, 10.0))
def test_detailed_balance_and_bounds(a, wl):
    p = _p(a, wl)
    acc = dissipator_coefficients(p, Environment.accelerated())
    th = dissipator_coefficients(p, Environment.thermal(unruh_temperature(a)))
    assert acc.b1 / acc.a1 == pytest.approx(math.tanh(math.pi / a), rel=1e-12)
    assert acc.a1 >= acc.b1 > 0
    assert abs(acc.a2) <= acc.a1 and abs(acc.b2) <= acc.b1
    # same single-atom rates, different cross terms
    assert th.a1 == pytest.approx(acc.a1, rel=1e-14)
    assert th.b1 == acc.b1
    assert th.b2 == pytest.approx(acc.b1 * thermal_modulating_function(1.0, wl), rel=1e-14, abs=1e-300)


def test_inertial_has_equal_single_atom_rates():
    c = dissipator_coefficients(_p(3.0, 1.0), Environment.inertial())
    assert c.a1 == c.b1


def test_kms_ratio_of_closed_form():
    for a in (0.5, 1.0, 3.0):
        lam = 0.7
        ratio = fourier_correlator("G11", -lam, a) / fourier_correlator("G11", lam, a)
        assert ratio == pytest.approx(math.exp(-2 * math.pi * lam / a), rel=1e-12)


def test_coefficients_from_closed_spectra_reproduce_dissipator():
    p = _p(2.0, 1.0)
    spectra = [fourier_correlator(c, s, p.accel, p.separation) for c in ("G11", "G12") for s in (1.0, -1.0)]
    got = coefficients_from_spectra(p, *spectra)
    want = dissipator_coefficients(p, Environment.accelerated())
    np.testing.assert_allclose(got.as_tuple(), want.as_tuple(), rtol=1e-13)


# --- quadrature oracle -----------------------------------------------------------------


def test_oracle_g11_closed_form_a1():
    p = _p(1.0, 1.0)
    expected = (1 / (2 * math.pi)) / (1 - math.exp(-2 * math.pi))
    assert oracle_fourier_transform("G11", p, 1.0) == pytest.approx(expected, rel=1e-4)


def test_oracle_fixes_modulating_function():
    p = _p(2.0, 1.0)
    ratio = oracle_fourier_transform("G12", p, 1.0) / oracle_fourier_transform("G11", p, 1.0)
    assert ratio == pytest.approx(modulating_function(1.0, 2.0, 1.0), rel=1e-4)


@pytest.mark.parametrize("a", [0.5, 2.0, 10.0])
@pytest.mark.parametrize("wl", [0.5, 1.0, 4.0])
def test_oracle_grid(a, wl):
    p = _p(a, wl)
    for corr in ("G11", "G12"):
        got = oracle_fourier_transform(corr, p, 1.0)
        want = fourier_correlator(corr, 1.0, a, wl)
        assert got == pytest.approx(want, rel=1e-4)


def test_oracle_negative_frequency_detailed_balance():
    p = _p(2.0, 1.0)
    pos = oracle_fourier_transform("G11", p, 1.0)
    neg = oracle_fourier_transform("G11", p, -1.0, atol=1e-10)
    assert neg / pos == pytest.approx(math.exp(-math.pi), rel=1e-4)


def test_oracle_reports_non_convergence():
    with pytest.raises(FourierOracleError) as info:
        oracle_fourier_transform("G11", _p(2.0, 1.0), 1.0, eps_values=(0.8, 0.4, 0.2), rtol=1e-10)
    assert info.value.error_estimate > 0


def test_oracle_rejects_bad_input():
    with pytest.raises(ValueError):
        oracle_fourier_transform("G11", _p(2.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        oracle_fourier_transform("G11", _p(0.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        oracle_fourier_transform("G13", _p(2.0, 1.0), 1.0)


def test_scaled_coefficients():
    c = DissipatorCoefficients(1.0, 0.5, 0.8, 0.4).scaled(2.0)
    assert c.as_tuple() == (2.0, 1.0, 1.6, 0.8)
