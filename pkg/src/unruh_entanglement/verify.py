"""Oracle self-checks behind ``unruh-ent verify``.

Each check compares a production code path with an independent route
(closed forms, matrix exponential, brute-force quadrature, the general
two-qubit concurrence) and reports the measured discrepancy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic, coefficients, dynamics, entanglement
from .params import Environment, PhysicalParams, PopulationState, XStateDensityMatrix

GAMMA0 = 1e-3


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""


def _check(name: str, measured: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(measured < tol), float(measured), tol, detail)


def _p(a: float, wl: float) -> PhysicalParams:
    return PhysicalParams(omega=1.0, accel=a, separation=wl, gamma0=GAMMA0)


def check_large_L() -> list[CheckResult]:
    out = []
    tau = np.linspace(0.0, 10.0, 1001)
    cfg = dynamics.IntegratorConfig(output_grid=tuple(tau))
    for a in (0.5, 2.0, 10.0):
        p = _p(a, 1.0)
        c = coefficients.dissipator_coefficients(p, Environment.accelerated())
        indep = coefficients.DissipatorCoefficients(c.a1, 0.0, c.b1, 0.0)
        traj = dynamics.integrate(PopulationState.antisymmetric(), indep, cfg, gamma0=p.gamma0)
        ref = analytic.large_L_solution("A", p, Environment.accelerated(), tau)
        out.append(_check(f"large-L |A> vs closed form (a/w={a:g})", np.abs(traj.populations - ref).max(), 1e-8))
    return out


def check_dicke() -> list[CheckResult]:
    out = []
    tau = np.linspace(0.0, 20.0, 2001)
    cfg = dynamics.IntegratorConfig(output_grid=tuple(tau))
    for a in (0.5, 2.0, 10.0):
        p = _p(a, 0.0)
        env = Environment.accelerated()
        traj = dynamics.evolve(PopulationState.symmetric(), p, env, cfg)
        ref = analytic.dicke_solution("S", p, env, tau)
        out.append(_check(f"Dicke |S> vs closed form (a/w={a:g})", np.abs(traj.populations - ref).max(), 1e-8))
        dark = dynamics.evolve(PopulationState.antisymmetric(), p, env, cfg)
        drift = np.abs(dark.populations[-1] - [0.0, 1.0, 0.0, 0.0]).max()
        out.append(_check(f"Dicke |A> stays dark (a/w={a:g})", drift, 1e-10))
    return out


def check_fixed_point() -> list[CheckResult]:
    out = []
    p = _p(2.0, 1.0)
    env = Environment.accelerated()
    target = analytic.asymptotic_state(p, env).as_array()
    c = coefficients.dissipator_coefficients(p, env).scaled(1.0 / p.gamma0)
    resid = np.abs(dynamics.population_rhs(c, target)).max()
    out.append(_check("fixed point is stationary", resid, 1e-12))
    cfg = dynamics.IntegratorConfig(t_max=50.0, samples=501)
    for name in ("A", "S", "E", "mixed"):
        traj = dynamics.evolve(PopulationState.named(name), p, env, cfg)
        out.append(_check(f"relaxes to fixed point from {name}", np.abs(traj.populations[-1] - target).max(), 1e-4))
    return out


def check_exact_vs_rk45() -> list[CheckResult]:
    p = _p(2.0, 1.0)
    env = Environment.accelerated()
    rk = dynamics.evolve(PopulationState.excited(), p, env, dynamics.IntegratorConfig(t_max=20.0, samples=201))
    ex = dynamics.evolve(
        PopulationState.excited(), p, env, dynamics.IntegratorConfig(method="exact", t_max=20.0, samples=201)
    )
    return [_check("RK45 vs matrix exponential", np.abs(rk.populations - ex.populations).max(), 1e-8)]


def check_decay_rates() -> list[CheckResult]:
    out = []
    h = 1e-5
    cfg = dynamics.IntegratorConfig(method="exact", output_grid=(0.0, h))
    for a in (0.5, 2.0, 10.0):
        p = _p(a, 1.0)
        env = Environment.accelerated()
        c = coefficients.dissipator_coefficients(p, env)
        indep = coefficients.DissipatorCoefficients(c.a1, 0.0, c.b1, 0.0)
        tr = dynamics.integrate(PopulationState.antisymmetric(), indep, cfg, gamma0=p.gamma0)
        slope = -(tr.concurrence[1] - tr.concurrence[0]) / h
        expect = analytic.initial_concurrence_decay_rate("large_L", p) / p.gamma0
        out.append(_check(f"initial decay rate, large L (a/w={a:g})", abs(slope / expect - 1), 5e-3))
        pd = _p(a, 0.0)
        tr = dynamics.evolve(PopulationState.symmetric(), pd, env, cfg)
        slope = -(tr.concurrence[1] - tr.concurrence[0]) / h
        expect = analytic.initial_concurrence_decay_rate("dicke_S", pd) / pd.gamma0
        out.append(_check(f"initial decay rate, Dicke |S> (a/w={a:g})", abs(slope / expect - 1), 5e-3))
    return out


def check_small_a_series() -> list[CheckResult]:
    out = []
    for wl in (0.5, 1.0, 4.0):
        res = [
            abs(coefficients.modulating_function(1.0, a, wl) - coefficients.small_accel_series(1.0, a, wl))
            for a in (0.1, 0.025)
        ]
        ratio = res[0] / res[1]
        out.append(
            CheckResult(f"small-a residual ~ a^4 (wL={wl:g})", 128 <= ratio <= 512, ratio, 256.0, "ratio in [128, 512]")
        )
    return out


def random_x_states(n: int, rng: np.random.Generator, coherences: bool = True) -> list[XStateDensityMatrix]:
    """Random valid X states; coherences are drawn below 95% of their positivity bound."""
    states = []
    for _ in range(n):
        d = rng.dirichlet([2.0, 2.0, 2.0, 2.0])
        if coherences:
            ph14, ph23 = rng.uniform(0, 2 * math.pi, 2)
            m14 = 0.95 * rng.uniform() * math.sqrt(d[0] * d[3])
            m23 = 0.95 * rng.uniform() * math.sqrt(d[1] * d[2])
            states.append(XStateDensityMatrix(tuple(d), m14 * np.exp(1j * ph14), m23 * np.exp(1j * ph23)))
        else:
            states.append(XStateDensityMatrix(tuple(d)))
    return states


def check_wootters(n: int = 1000, seed: int = 2) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    err_x = max(
        abs(entanglement.concurrence_x(x) - entanglement.wootters_concurrence(x.as_matrix()))
        for x in random_x_states(n, rng)
    )
    err_pop = 0.0
    for pops in rng.dirichlet([1.0, 1.0, 1.0, 1.0], size=n):
        s = PopulationState.from_array(pops / pops.sum())
        rho = entanglement.reconstruct(s).as_matrix()
        err_pop = max(err_pop, abs(entanglement.concurrence_populations(s) - entanglement.wootters_concurrence(rho)))
    return [
        _check("X-state concurrence vs Wootters", err_x, 1e-9),
        _check("population concurrence vs Wootters", err_pop, 1e-9),
    ]


FOURIER_GRID = [(a, wl) for a in (0.5, 2.0, 10.0) for wl in (0.5, 1.0, 4.0)]


def check_fourier() -> list[CheckResult]:
    """Spectra and dissipator coefficients against brute-force Fourier transforms."""
    out = []
    for a, wl in FOURIER_GRID:
        p = _p(a, wl)
        spectra = {}
        for corr in ("G11", "G12"):
            for sign in (1.0, -1.0):
                spectra[corr, sign] = coefficients.oracle_fourier_transform(corr, p, sign * p.omega, atol=1e-10)
        for corr in ("G11", "G12"):
            closed = coefficients.fourier_correlator(corr, p.omega, p.accel, p.separation)
            err = abs(spectra[corr, 1.0] / closed - 1.0)
            out.append(_check(f"fourier {corr} (a/w={a:g}, wL={wl:g})", err, 1e-4))
        numeric = coefficients.coefficients_from_spectra(
            p, spectra["G11", 1.0], spectra["G11", -1.0], spectra["G12", 1.0], spectra["G12", -1.0]
        )
        closed = coefficients.dissipator_coefficients(p, Environment.accelerated())
        for name in ("a1", "a2", "b1", "b2"):
            want, got = getattr(closed, name), getattr(numeric, name)
            err = abs(got - want) / max(abs(want), 1e-12 * p.gamma0)
            out.append(_check(f"fourier coefficient {name} (a/w={a:g}, wL={wl:g})", err, 1e-4))
    return out


QUICK_CHECKS: list[Callable[[], list[CheckResult]]] = [
    check_large_L,
    check_dicke,
    check_fixed_point,
    check_exact_vs_rk45,
    check_decay_rates,
    check_small_a_series,
    check_wootters,
]


def run_checks(quick: bool = False) -> list[CheckResult]:
    results: list[CheckResult] = []
    for fn in QUICK_CHECKS + ([] if quick else [check_fourier]):
        try:
            results.extend(fn())
        except Exception as exc:  # a crashing check is a failing check
            results.append(CheckResult(fn.__name__, False, math.nan, math.nan, f"raised {exc!r}"))
    return results


def format_report(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  status  measured     tolerance"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  {r.detail}" if r.detail else ""
        lines.append(f"{r.name:<{width}}  {status}    {r.measured:<11.3e}  {r.tolerance:.1e}{extra}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
